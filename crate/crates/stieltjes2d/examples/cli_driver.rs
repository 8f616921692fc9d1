//! Drive the command line in-process and read fields back from the report.

use stieltjes2d::io::run;

fn main() {
    let lines = [
        "integrate --rule midpoint --f reg:sum_ts --u reg:prod_ts --rect 0 1 0 1",
        "certify --rule trapezoid4 --bound trapezoid-bv --f reg:t2s2 --rect 0 1 0 1 --V 1",
        "certify --rule trapezoid4 --bound trapezoid-bv --f reg:t2s2 --rect 0 1 0 1 --V 0.1",
        "variation --f reg:stair --rect 0 1 0 1",
        "integrate --rule midpoint --f reg:missing --rect 0 1 0 1",
    ];
    for line in lines {
        let out = run(std::iter::once("stieltjes2d").chain(line.split_whitespace()));
        println!("$ stieltjes2d {line}\nexit {}", out.exit);
        if let Some(r) = &out.report {
            for key in ["value", "bound", "residual", "satisfied", "vitali"] {
                if let Some(v) = r.get(key) {
                    println!("  {key} = {v}");
                }
            }
        } else {
            print!("  {}", out.stderr);
        }
    }
}
