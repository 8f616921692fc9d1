//! Shared vocabulary: rectangles, surfaces, partitions and certificates.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Closed axis-aligned rectangle `[a,b] x [c,d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Rect {
    /// Strict constructor: rejects `a >= b`, `c >= d` and non-finite input.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::Domain("rectangle coordinates must be finite".into()));
        }
        if a >= b || c >= d {
            return Err(Error::Domain(format!(
                "degenerate rectangle [{a},{b}]x[{c},{d}]"
            )));
        }
        Ok(Rect { a, b, c, d })
    }

    /// Permissive constructor used for quadrants; allows zero width or height.
    pub fn span(a: f64, b: f64, c: f64, d: f64) -> Self {
        debug_assert!(a <= b && c <= d);
        Rect { a, b, c, d }
    }

    pub fn unit() -> Self {
        Rect { a: 0.0, b: 1.0, c: 0.0, d: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn height(&self) -> f64 {
        self.d - self.c
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.a + self.b), 0.5 * (self.c + self.d))
    }

    pub fn is_degenerate(&self) -> bool {
        self.a >= self.b || self.c >= self.d
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.a <= x && x <= self.b && self.c <= y && y <= self.d
    }

    pub fn contains_rect(&self, r: &Rect) -> bool {
        self.a <= r.a && r.b <= self.b && self.c <= r.c && r.d <= self.d
    }

    /// Largest absolute coordinate, at least 1. Used to scale tolerances.
    pub fn scale(&self) -> f64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .fold(1.0_f64, |m, v| m.max(v.abs()))
    }

    /// Affine image of `(tx, ty) in [0,1]^2`.
    pub fn lerp(&self, tx: f64, ty: f64) -> (f64, f64) {
        (self.a + tx * self.width(), self.c + ty * self.height())
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.a, self.b, self.c, self.d)
    }
}

/// Quadrants meeting at `(x, y)`, ordered SW, SE, NW, NE.
pub fn rect_split(q: &Rect, x: f64, y: f64) -> Result<[Rect; 4]> {
    if !q.contains(x, y) {
        return Err(Error::Domain(format!("split point ({x}, {y}) outside {q}")));
    }
    Ok([
        Rect::span(q.a, x, q.c, y),
        Rect::span(x, q.b, q.c, y),
        Rect::span(q.a, x, y, q.d),
        Rect::span(x, q.b, y, q.d),
    ])
}

type Fxy = dyn Fn(f64, f64) -> f64 + Send + Sync;
type PartialFn = dyn Fn(u32, u32) -> Option<Surface> + Send + Sync;

#[derive(Clone)]
struct Inner {
    name: String,
    eval: Arc<Fxy>,
    partials: Option<Arc<PartialFn>>,
    prim: Option<Arc<Fxy>>,
    prim_x: Option<Arc<Fxy>>,
    prim_y: Option<Arc<Fxy>>,
    jumps_x: Vec<f64>,
    jumps_y: Vec<f64>,
    domain: Option<Rect>,
}

/// A real function of two variables plus optional analytic metadata.
///
/// Metadata:
/// * `partial(i, j)` is the surface `d^{i+j} f / dt^i ds^j`;
/// * the primitive `P` satisfies `P_ts = f`, so cell integrals are `delta11(P)`;
/// * the line primitives `Px`, `Py` satisfy `d/dt Px = f` and `d/ds Py = f`;
/// * jump lines flag discontinuities that the oracle should respect.
///
/// Cloning is cheap (shared pointer).
#[derive(Clone)]
pub struct Surface(Arc<Inner>);

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Surface")
            .field("name", &self.0.name)
            .field("partials", &self.0.partials.is_some())
            .field("primitive", &self.0.prim.is_some())
            .field("jumps_x", &self.0.jumps_x)
            .field("jumps_y", &self.0.jumps_y)
            .finish()
    }
}

impl Surface {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Surface(Arc::new(Inner {
            name: name.into(),
            eval: Arc::new(f),
            partials: None,
            prim: None,
            prim_x: None,
            prim_y: None,
            jumps_x: Vec::new(),
            jumps_y: Vec::new(),
            domain: None,
        }))
    }

    pub fn constant(v: f64) -> Self {
        Surface::new(format!("const({v})"), move |_, _| v)
            .with_partials(move |i, j| {
                if i + j == 0 {
                    Some(Surface::constant(v))
                } else {
                    Some(Surface::constant(0.0))
                }
            })
            .with_primitive(move |x, y| v * x * y)
            .with_line_primitives(move |x, _| v * x, move |_, y| v * y)
    }

    fn inner_mut(&mut self) -> &mut Inner {
        Arc::make_mut(&mut self.0)
    }

    pub fn with_partials<F>(mut self, p: F) -> Self
    where
        F: Fn(u32, u32) -> Option<Surface> + Send + Sync + 'static,
    {
        self.inner_mut().partials = Some(Arc::new(p));
        self
    }

    pub fn with_primitive<F>(mut self, p: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        self.inner_mut().prim = Some(Arc::new(p));
        self
    }

    pub fn with_line_primitives<F, G>(mut self, px: F, py: G) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let inner = self.inner_mut();
        inner.prim_x = Some(Arc::new(px));
        inner.prim_y = Some(Arc::new(py));
        self
    }

    pub fn with_jumps(mut self, xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let inner = self.inner_mut();
        inner.jumps_x = xs;
        inner.jumps_y = ys;
        self
    }

    pub fn with_domain(mut self, q: Rect) -> Self {
        self.inner_mut().domain = Some(q);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.inner_mut().name = name.into();
        self
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.0.eval)(x, y)
    }

    /// Checked evaluation: domain error outside the declared domain, data error on non-finite output.
    pub fn try_eval(&self, x: f64, y: f64) -> Result<f64> {
        if let Some(q) = &self.0.domain {
            if !q.contains(x, y) {
                return Err(Error::Domain(format!(
                    "({x}, {y}) outside the domain {q} of {}",
                    self.0.name
                )));
            }
        }
        let v = self.eval(x, y);
        if !v.is_finite() {
            return Err(Error::Data(format!("{} is not finite at ({x}, {y})", self.0.name)));
        }
        Ok(v)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn domain(&self) -> Option<Rect> {
        self.0.domain
    }

    /// Domain error when `q` is not inside the declared domain.
    pub fn check_covers(&self, q: &Rect) -> Result<()> {
        match &self.0.domain {
            Some(dom) if !dom.contains_rect(q) => Err(Error::Domain(format!(
                "{q} is not inside the domain {dom} of {}",
                self.0.name
            ))),
            _ => Ok(()),
        }
    }

    pub fn jumps_x(&self) -> &[f64] {
        &self.0.jumps_x
    }

    pub fn jumps_y(&self) -> &[f64] {
        &self.0.jumps_y
    }

    pub fn has_jumps(&self) -> bool {
        !self.0.jumps_x.is_empty() || !self.0.jumps_y.is_empty()
    }

    /// Mixed partial `d^{i+j} f / dt^i ds^j` from metadata.
    pub fn partial(&self, i: u32, j: u32) -> Option<Surface> {
        if i == 0 && j == 0 {
            return Some(self.clone());
        }
        self.0.partials.as_ref().and_then(|p| p(i, j))
    }

    pub fn has_primitive(&self) -> bool {
        self.0.prim.is_some()
    }

    /// Closed-form `int int_r f` when a primitive is attached.
    pub fn exact_cell_integral(&self, r: &Rect) -> Option<f64> {
        self.0.prim.as_ref().map(|p| {
            p(r.b, r.d) - p(r.b, r.c) - p(r.a, r.d) + p(r.a, r.c)
        })
    }

    /// Closed-form `int_{x0}^{x1} f(t, y) dt`.
    pub fn exact_x_integral(&self, x0: f64, x1: f64, y: f64) -> Option<f64> {
        self.0.prim_x.as_ref().map(|p| p(x1, y) - p(x0, y))
    }

    /// Closed-form `int_{y0}^{y1} f(x, s) ds`.
    pub fn exact_y_integral(&self, x: f64, y0: f64, y1: f64) -> Option<f64> {
        self.0.prim_y.as_ref().map(|p| p(x, y1) - p(x, y0))
    }

    /// `sum_k w_k s_k`, carrying metadata that every term provides.
    pub fn combine(name: impl Into<String>, terms: Vec<(f64, Surface)>) -> Surface {
        let t = Arc::new(terms);
        let te = t.clone();
        let mut s = Surface::new(name, move |x, y| te.iter().map(|(w, s)| w * s.eval(x, y)).sum());
        if t.iter().all(|(_, s)| s.0.partials.is_some()) {
            let tp = t.clone();
            s = s.with_partials(move |i, j| {
                let parts: Option<Vec<(f64, Surface)>> = tp
                    .iter()
                    .map(|(w, s)| s.partial(i, j).map(|p| (*w, p)))
                    .collect();
                parts.map(|p| Surface::combine(format!("d{i}{j}(sum)"), p))
            });
        }
        if t.iter().all(|(_, s)| s.0.prim.is_some()) {
            let tp = t.clone();
            s = s.with_primitive(move |x, y| {
                tp.iter().map(|(w, s)| w * (s.0.prim.as_ref().unwrap())(x, y)).sum()
            });
        }
        if t.iter().all(|(_, s)| s.0.prim_x.is_some() && s.0.prim_y.is_some()) {
            let tx = t.clone();
            let ty = t.clone();
            s = s.with_line_primitives(
                move |x, y| tx.iter().map(|(w, s)| w * (s.0.prim_x.as_ref().unwrap())(x, y)).sum(),
                move |x, y| ty.iter().map(|(w, s)| w * (s.0.prim_y.as_ref().unwrap())(x, y)).sum(),
            );
        }
        let mut jx: Vec<f64> = t.iter().flat_map(|(_, s)| s.0.jumps_x.iter().copied()).collect();
        let mut jy: Vec<f64> = t.iter().flat_map(|(_, s)| s.0.jumps_y.iter().copied()).collect();
        jx.sort_by(f64::total_cmp);
        jx.dedup();
        jy.sort_by(f64::total_cmp);
        jy.dedup();
        s = s.with_jumps(jx, jy);
        let mut dom: Option<Rect> = None;
        for (_, term) in t.iter() {
            if let Some(r) = term.0.domain {
                dom = Some(match dom {
                    None => r,
                    Some(q) => Rect::span(q.a.max(r.a), q.b.min(r.b), q.c.max(r.c), q.d.min(r.d)),
                });
            }
        }
        if let Some(q) = dom {
            s = s.with_domain(q);
        }
        s
    }

    pub fn scaled(&self, w: f64) -> Surface {
        Surface::combine(format!("{w}*{}", self.name()), vec![(w, self.clone())])
    }

    pub fn plus(&self, other: &Surface) -> Surface {
        Surface::combine(
            format!("{}+{}", self.name(), other.name()),
            vec![(1.0, self.clone()), (1.0, other.clone())],
        )
    }

    /// Pointwise product; metadata is dropped.
    pub fn times(&self, other: &Surface) -> Surface {
        let (f, g) = (self.clone(), other.clone());
        let mut jx = f.jumps_x().to_vec();
        jx.extend_from_slice(g.jumps_x());
        let mut jy = f.jumps_y().to_vec();
        jy.extend_from_slice(g.jumps_y());
        Surface::new(format!("({})*({})", f.name(), g.name()), move |x, y| {
            f.eval(x, y) * g.eval(x, y)
        })
        .with_jumps(jx, jy)
    }

    /// `(t, s) -> f(s, t)`.
    pub fn transposed(&self) -> Surface {
        let f = self.clone();
        Surface::new(format!("T({})", self.name()), move |x, y| f.eval(y, x))
            .with_jumps(self.jumps_y().to_vec(), self.jumps_x().to_vec())
    }
}

/// `u(a',c') - u(a',d') - u(b',c') + u(b',d')` over `cell`.
#[inline]
pub fn delta11(u: &Surface, cell: &Rect) -> f64 {
    u.eval(cell.a, cell.c) - u.eval(cell.a, cell.d) - u.eval(cell.b, cell.c) + u.eval(cell.b, cell.d)
}

/// `f` at every node of the tensor grid, row-major: entry `j * xs.len() + i` is `f(xs[i], ys[j])`.
pub fn sample_nodes(f: &Surface, xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &y in ys {
        for &x in xs {
            out.push(f.eval(x, y));
        }
    }
    out
}

/// The four corner values in the order `(a,c), (a,d), (b,c), (b,d)`.
pub fn corners(f: &Surface, q: &Rect) -> [f64; 4] {
    [f.eval(q.a, q.c), f.eval(q.a, q.d), f.eval(q.b, q.c), f.eval(q.b, q.d)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagScheme {
    /// `xi_ij = zeta_i`, `eta_ij = eta_j`.
    Restricted,
    /// Any tag inside its closed cell.
    Unrestricted,
}

/// Tagged rectangular partition. Tags are stored row-major: cell `(i, j)` at `j * nx + i`.
#[derive(Debug, Clone)]
pub struct GridPartition {
    xs: Vec<f64>,
    ys: Vec<f64>,
    tags: Vec<(f64, f64)>,
    scheme: TagScheme,
}

fn check_axis(v: &[f64], what: &str) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::Domain(format!("{what} needs at least two nodes")));
    }
    if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("{what} must be finite and strictly increasing")));
    }
    Ok(())
}

pub(crate) fn uniform_nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    let mut v: Vec<f64> = (0..=n).map(|i| lo + i as f64 * h).collect();
    v[n] = hi;
    v
}

impl GridPartition {
    /// Restricted tags from per-column `zeta` and per-row `eta`.
    pub fn restricted(xs: Vec<f64>, ys: Vec<f64>, zeta: &[f64], eta: &[f64]) -> Result<Self> {
        check_axis(&xs, "xs")?;
        check_axis(&ys, "ys")?;
        let (nx, ny) = (xs.len() - 1, ys.len() - 1);
        if zeta.len() != nx || eta.len() != ny {
            return Err(Error::Domain("tag vectors must match the cell counts".into()));
        }
        for i in 0..nx {
            if !(xs[i] <= zeta[i] && zeta[i] <= xs[i + 1]) {
                return Err(Error::Domain(format!("zeta[{i}] = {} outside its column", zeta[i])));
            }
        }
        for j in 0..ny {
            if !(ys[j] <= eta[j] && eta[j] <= ys[j + 1]) {
                return Err(Error::Domain(format!("eta[{j}] = {} outside its row", eta[j])));
            }
        }
        let mut tags = Vec::with_capacity(nx * ny);
        for &e in eta {
            for &z in zeta {
                tags.push((z, e));
            }
        }
        Ok(GridPartition { xs, ys, tags, scheme: TagScheme::Restricted })
    }

    /// Per-cell tags, row-major.
    pub fn unrestricted(xs: Vec<f64>, ys: Vec<f64>, tags: Vec<(f64, f64)>) -> Result<Self> {
        check_axis(&xs, "xs")?;
        check_axis(&ys, "ys")?;
        let nx = xs.len() - 1;
        if tags.len() != nx * (ys.len() - 1) {
            return Err(Error::Domain("one tag per cell is required".into()));
        }
        for (k, &(t, s)) in tags.iter().enumerate() {
            let (i, j) = (k % nx, k / nx);
            if !(xs[i] <= t && t <= xs[i + 1] && ys[j] <= s && s <= ys[j + 1]) {
                return Err(Error::Domain(format!("tag ({t}, {s}) outside cell ({i}, {j})")));
            }
        }
        Ok(GridPartition { xs, ys, tags, scheme: TagScheme::Unrestricted })
    }

    /// Uniform `nx x ny` grid with cell-midpoint tags.
    pub fn uniform(q: &Rect, nx: usize, ny: usize) -> Result<Self> {
        Self::uniform_at(q, nx, ny, 0.5)
    }

    /// Uniform grid with tags at relative position `theta in [0,1]` inside every cell.
    pub fn uniform_at(q: &Rect, nx: usize, ny: usize, theta: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::Domain("cell counts must be positive".into()));
        }
        let xs = uniform_nodes(q.a, q.b, nx);
        let ys = uniform_nodes(q.c, q.d, ny);
        let zeta: Vec<f64> = xs.windows(2).map(|w| w[0] + theta * (w[1] - w[0])).collect();
        let eta: Vec<f64> = ys.windows(2).map(|w| w[0] + theta * (w[1] - w[0])).collect();
        Self::restricted(xs, ys, &zeta, &eta)
    }

    /// `2^level x 2^level` dyadic grid with midpoint tags.
    pub fn dyadic(q: &Rect, level: u32) -> Result<Self> {
        let n = 1usize << level;
        Self::uniform(q, n, n)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn nx(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn ny(&self) -> usize {
        self.ys.len() - 1
    }

    pub fn scheme(&self) -> TagScheme {
        self.scheme
    }

    pub fn tag(&self, i: usize, j: usize) -> (f64, f64) {
        self.tags[j * self.nx() + i]
    }

    pub fn cell(&self, i: usize, j: usize) -> Rect {
        Rect::span(self.xs[i], self.xs[i + 1], self.ys[j], self.ys[j + 1])
    }

    pub fn rect(&self) -> Rect {
        Rect::span(self.xs[0], self.xs[self.nx()], self.ys[0], self.ys[self.ny()])
    }

    /// Mesh norm: the largest cell side.
    pub fn mesh(&self) -> f64 {
        let mx = self.xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let my = self.ys.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        mx.max(my)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Regularity classes consumed by the bound catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularity {
    BoundedBivariation { v: f64 },
    ArzelaVariation { v: f64 },
    Holder { h1: f64, h2: f64, beta1: f64, beta2: f64 },
    Lipschitz { l1: f64, l2: f64 },
    Range { min: f64, max: f64 },
    PartialRange { min1: f64, max1: f64, min2: f64, max2: f64 },
    Bimonotone { direction: Direction },
    Monotone { direction: Direction },
    CornerGrowth {
        la: f64,
        lb: f64,
        lc: f64,
        ld: f64,
        alpha1: f64,
        alpha2: f64,
        beta1: f64,
        beta2: f64,
    },
}

impl Regularity {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Certificate(m.to_string()));
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        let expo = |v: f64| v.is_finite() && v > 0.0 && v <= 1.0;
        match *self {
            Regularity::BoundedBivariation { v } | Regularity::ArzelaVariation { v } => {
                if !nonneg(v) {
                    return bad("variation must be finite and >= 0");
                }
            }
            Regularity::Holder { h1, h2, beta1, beta2 } => {
                if !nonneg(h1) || !nonneg(h2) {
                    return bad("Holder constants must be >= 0");
                }
                if !expo(beta1) || !expo(beta2) {
                    return bad("Holder exponents must lie in (0, 1]");
                }
            }
            Regularity::Lipschitz { l1, l2 } => {
                if !nonneg(l1) || !nonneg(l2) {
                    return bad("Lipschitz constants must be >= 0");
                }
            }
            Regularity::Range { min, max } => {
                if !(min.is_finite() && max.is_finite() && min <= max) {
                    return bad("range needs finite m <= M");
                }
            }
            Regularity::PartialRange { min1, max1, min2, max2 } => {
                if !(min1 <= max1 && min2 <= max2) || ![min1, max1, min2, max2].iter().all(|v| v.is_finite()) {
                    return bad("partial range needs finite m1 <= M1 and m2 <= M2");
                }
            }
            Regularity::Bimonotone { .. } | Regularity::Monotone { .. } => {}
            Regularity::CornerGrowth { la, lb, lc, ld, alpha1, alpha2, beta1, beta2 } => {
                if ![la, lb, lc, ld].iter().all(|&v| nonneg(v)) {
                    return bad("corner growth constants must be >= 0");
                }
                if ![alpha1, alpha2, beta1, beta2].iter().all(|&v| v.is_finite() && v > 0.0) {
                    return bad("corner growth exponents must be > 0");
                }
            }
        }
        Ok(())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Regularity::BoundedBivariation { .. } => "bivariation",
            Regularity::ArzelaVariation { .. } => "arzela",
            Regularity::Holder { .. } => "holder",
            Regularity::Lipschitz { .. } => "lipschitz",
            Regularity::Range { .. } => "range",
            Regularity::PartialRange { .. } => "partial-range",
            Regularity::Bimonotone { .. } => "bimonotone",
            Regularity::Monotone { .. } => "monotone",
            Regularity::CornerGrowth { .. } => "corner-growth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Declared,
    /// Sampled; `inflation` is the safety factor already applied.
    Estimated { samples: usize, inflation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityCertificate {
    pub regularity: Regularity,
    pub provenance: Provenance,
}

impl RegularityCertificate {
    pub fn declared(regularity: Regularity) -> Result<Self> {
        regularity.validate()?;
        Ok(RegularityCertificate { regularity, provenance: Provenance::Declared })
    }

    pub fn estimated(regularity: Regularity, samples: usize, inflation: f64) -> Result<Self> {
        regularity.validate()?;
        Ok(RegularityCertificate {
            regularity,
            provenance: Provenance::Estimated { samples, inflation },
        })
    }

    pub fn is_declared(&self) -> bool {
        self.provenance == Provenance::Declared
    }
}

/// Absolute slack added on top of the oracle error when checking a certificate.
pub const CERT_SLACK: f64 = 1e-9;

/// A rule estimate, its a-priori bound and, optionally, the oracle verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCertificate {
    pub rule_id: String,
    pub estimate: f64,
    pub bound: f64,
    pub oracle: Option<f64>,
    pub oracle_error: Option<f64>,
    pub residual: Option<f64>,
    pub satisfied: Option<bool>,
}

impl ErrorCertificate {
    pub fn new(rule_id: impl Into<String>, estimate: f64, bound: f64) -> Result<Self> {
        if !bound.is_finite() || bound < 0.0 {
            return Err(Error::Certificate(format!("bound {bound} must be finite and >= 0")));
        }
        Ok(ErrorCertificate {
            rule_id: rule_id.into(),
            estimate,
            bound,
            oracle: None,
            oracle_error: None,
            residual: None,
            satisfied: None,
        })
    }

    /// Attach the reference value; `err` is the oracle's own error estimate.
    pub fn with_oracle(mut self, oracle: f64, err: f64) -> Self {
        let residual = (self.estimate - oracle).abs();
        self.oracle = Some(oracle);
        self.oracle_error = Some(err);
        self.residual = Some(residual);
        self.satisfied = Some(residual <= self.bound + err + CERT_SLACK);
        self
    }

    /// `residual / bound`, infinite for a zero bound with a nonzero residual.
    pub fn ratio(&self) -> Option<f64> {
        self.residual.map(|r| {
            if self.bound > 0.0 {
                r / self.bound
            } else if r == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
    }
}

/// One inequality check `lhs <= rhs + slack`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl Trial {
    pub fn new(lhs: f64, rhs: f64, slack: f64) -> Self {
        Trial { lhs, rhs, slack }
    }

    pub fn from_certificate(c: &ErrorCertificate) -> Option<Self> {
        Some(Trial::new(c.residual?, c.bound, c.oracle_error?))
    }

    pub fn holds(&self) -> bool {
        self.lhs.is_finite() && self.rhs.is_finite() && self.lhs <= self.rhs + self.slack + CERT_SLACK
    }

    /// How far the check overshoots (positive means violated).
    pub fn excess(&self) -> f64 {
        self.lhs - self.rhs - self.slack - CERT_SLACK
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts() -> Surface {
        Surface::new("ts", |t, s| t * s)
    }

    #[test]
    fn rect_rejects_degenerate() {
        assert!(Rect::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(Rect::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Rect::new(0.0, 1.0, 0.0, f64::NAN).is_err());
        let q = Rect::new(0.0, 2.0, 0.0, 4.0).unwrap();
        assert_eq!(q.area(), 8.0);
    }

    #[test]
    fn split_examples() {
        let q = Rect::unit();
        let r = rect_split(&q, 0.5, 0.5).unwrap();
        assert!(r.iter().all(|p| p.area() == 0.25));
        let r = rect_split(&q, 0.0, 0.0).unwrap();
        let areas: Vec<f64> = r.iter().map(|p| p.area()).collect();
        assert_eq!(areas, vec![0.0, 0.0, 0.0, 1.0]);
        let q = Rect::new(0.0, 2.0, 0.0, 4.0).unwrap();
        let r = rect_split(&q, 0.5, 1.0).unwrap();
        let areas: Vec<f64> = r.iter().map(|p| p.area()).collect();
        assert_eq!(areas, vec![0.5, 1.5, 1.5, 4.5]);
        assert!(rect_split(&q, 3.0, 1.0).is_err());
    }

    #[test]
    fn delta11_examples() {
        assert_eq!(delta11(&ts(), &Rect::unit()), 1.0);
        let sep = Surface::new("t2+s2", |t, s| t * t + s * s);
        assert_eq!(delta11(&sep, &Rect::new(0.3, 1.7, -2.0, 0.4).unwrap()), 0.0);
        let u = Surface::new("t2s2", |t, s| t * t * s * s);
        assert_eq!(delta11(&u, &Rect::new(1.0, 2.0, 1.0, 2.0).unwrap()), 9.0);
    }

    #[test]
    fn delta11_additive() {
        let u = Surface::new("sin", |t, s| (t * 1.3 + s * s).sin());
        let q = Rect::new(-0.3, 1.1, 0.2, 2.0).unwrap();
        let total: f64 = rect_split(&q, 0.41, 1.37).unwrap().iter().map(|r| delta11(&u, r)).sum();
        assert!((total - delta11(&u, &q)).abs() < 1e-12);
    }

    #[test]
    fn restricted_tags_are_shared() {
        let p = GridPartition::uniform(&Rect::unit(), 4, 3).unwrap();
        assert_eq!(p.scheme(), TagScheme::Restricted);
        for j in 0..3 {
            for i in 0..4 {
                assert_eq!(p.tag(i, j).0, p.tag(i, 0).0);
                assert_eq!(p.tag(i, j).1, p.tag(0, j).1);
            }
        }
        assert!(GridPartition::unrestricted(vec![0.0, 1.0], vec![0.0, 1.0], vec![(2.0, 0.5)]).is_err());
        assert!(GridPartition::restricted(vec![0.0, 0.0, 1.0], vec![0.0, 1.0], &[0.0, 0.5], &[0.5]).is_err());
    }

    #[test]
    fn certificate_validation() {
        assert!(RegularityCertificate::declared(Regularity::BoundedBivariation { v: -1.0 }).is_err());
        assert!(RegularityCertificate::declared(Regularity::Holder { h1: 1.0, h2: 1.0, beta1: 1.5, beta2: 0.5 }).is_err());
        assert!(RegularityCertificate::declared(Regularity::Range { min: 2.0, max: 1.0 }).is_err());
        assert!(ErrorCertificate::new("x", 0.0, f64::NAN).is_err());
        let c = ErrorCertificate::new("x", 0.3, 0.1).unwrap().with_oracle(0.25, 0.0);
        assert_eq!(c.satisfied, Some(true));
        let c = ErrorCertificate::new("x", 0.5, 0.1).unwrap().with_oracle(0.25, 0.0);
        assert_eq!(c.satisfied, Some(false));
    }

    #[test]
    fn combine_keeps_metadata() {
        let a = Surface::constant(2.0);
        let s = a.plus(&Surface::constant(3.0));
        assert_eq!(s.eval(0.3, 0.4), 5.0);
        assert_eq!(s.exact_cell_integral(&Rect::new(0.0, 2.0, 0.0, 1.0).unwrap()), Some(10.0));
        assert_eq!(s.partial(1, 0).unwrap().eval(0.1, 0.1), 0.0);
    }
}
