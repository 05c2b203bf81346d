//! Scalar equations met when a planar conic path crosses a hyperplane.
//!
//! * hyperbola: `A sec(b) + B tan(b) = C`
//! * ellipse: `A cos(b) + B sin(b) = C`
//! * parabola: `A b^2 + B b = C`
//!
//! The trigonometric solvers return each root together with its cosine and sine
//! so that callers can apply sheet or arc validity rules.

/// Relative width of the band in which a discriminant is clamped to zero.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

/// One root of a trigonometric path equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigRoot {
    /// Angle in `(-pi, pi]`.
    pub beta: f64,
    pub cos: f64,
    pub sin: f64,
    /// For `solve_sec_tan`: whether `sec(beta) > 0`, i.e. the root lies on the
    /// branch parametrized by `(-pi/2, pi/2)`. Always true for `solve_cos_sin`.
    pub valid: bool,
}

/// Root set of a trigonometric path equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrigRoots {
    None,
    One(TrigRoot),
    Two(TrigRoot, TrigRoot),
}

impl TrigRoots {
    /// Roots as a vector, in the order produced.
    pub fn to_vec(self) -> Vec<TrigRoot> {
        match self {
            Self::None => Vec::new(),
            Self::One(a) => vec![a],
            Self::Two(a, b) => vec![a, b],
        }
    }

    /// Roots whose validity flag is set.
    pub fn valid(self) -> Vec<TrigRoot> {
        self.to_vec().into_iter().filter(|r| r.valid).collect()
    }
}

fn trig_root(cos: f64, sin: f64, valid: bool) -> TrigRoot {
    TrigRoot {
        beta: sin.atan2(cos),
        cos,
        sin,
        valid,
    }
}

/// Solves `A sec(b) + B tan(b) = C`.
///
/// With `D = sqrt(C^2 - A^2 + B^2)` the roots are
/// `cos = (AC -+ BD)/(B^2 + C^2)`, `sin = (-AB -+ CD)/(B^2 + C^2)`; a root with
/// `cos <= 0` solves the equation on the opposite branch and is flagged invalid.
pub fn solve_sec_tan(a: f64, b: f64, c: f64) -> TrigRoots {
    let scale = a * a + b * b + c * c;
    if scale == 0.0 {
        return TrigRoots::None;
    }
    let disc = c * c - a * a + b * b;
    let den = b * b + c * c;
    if disc < -DISCRIMINANT_TOL * scale || den == 0.0 {
        return TrigRoots::None;
    }
    let root = |d: f64| {
        let cos = (a * c - b * d) / den;
        let sin = (-a * b - c * d) / den;
        let (cos, sin) = renormalize(cos, sin);
        trig_root(cos, sin, cos > 0.0)
    };
    if disc <= DISCRIMINANT_TOL * scale {
        return TrigRoots::One(root(0.0));
    }
    let d = disc.sqrt();
    TrigRoots::Two(root(d), root(-d))
}

/// Solves `A cos(b) + B sin(b) = C`.
///
/// With `D = sqrt(A^2 + B^2 - C^2)` the roots are
/// `cos = (AC +- BD)/(A^2 + B^2)`, `sin = (BC -+ AD)/(A^2 + B^2)`.
pub fn solve_cos_sin(a: f64, b: f64, c: f64) -> TrigRoots {
    let den = a * a + b * b;
    let scale = den + c * c;
    if den == 0.0 {
        return TrigRoots::None;
    }
    let disc = den - c * c;
    if disc < -DISCRIMINANT_TOL * scale {
        return TrigRoots::None;
    }
    let root = |d: f64| {
        let cos = (a * c + b * d) / den;
        let sin = (b * c - a * d) / den;
        let (cos, sin) = renormalize(cos, sin);
        trig_root(cos, sin, true)
    };
    if disc <= DISCRIMINANT_TOL * scale {
        return TrigRoots::One(root(0.0));
    }
    let d = disc.sqrt();
    TrigRoots::Two(root(d), root(-d))
}

fn renormalize(cos: f64, sin: f64) -> (f64, f64) {
    let r = cos.hypot(sin);
    if r > 0.0 {
        (cos / r, sin / r)
    } else {
        (cos, sin)
    }
}

/// Real roots of `A b^2 + B b = C`, ascending.
///
/// Uses the cancellation-free form of the quadratic formula; a vanishing leading
/// coefficient (relative to the others) degrades to the linear root `C / B`.
pub fn solve_parabola_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    quadratic_roots(a, b, -c)
}

/// Real roots of `a t^2 + b t + c = 0`, ascending, with a clamped discriminant.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    if a.abs() <= 1e-14 {
        if b.abs() <= 1e-14 {
            return Vec::new();
        }
        let lin = -c / b;
        if a == 0.0 {
            return vec![lin];
        }
        // The second root runs off to infinity; polish the finite one.
        return vec![newton_quadratic(a, b, c, lin)];
    }
    let disc = b * b - 4.0 * a * c;
    let band = DISCRIMINANT_TOL * (b * b + (4.0 * a * c).abs());
    if disc < -band {
        return Vec::new();
    }
    if disc <= band {
        return vec![-b / (2.0 * a)];
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum_or_one() * sq);
    let mut r = vec![q / a, c / q];
    r.sort_by(f64::total_cmp);
    r
}

fn newton_quadratic(a: f64, b: f64, c: f64, mut t: f64) -> f64 {
    for _ in 0..3 {
        let f = (a * t + b) * t + c;
        let df = 2.0 * a * t + b;
        if df == 0.0 {
            break;
        }
        t -= f / df;
    }
    t
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}
