//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use minball::conic::{
    build_pair_hyperplane, intersect_sequence, parametrize_2d, ConicKind, ConicSection,
};
use minball::scalar::{solve_cos_sin, solve_parabola_quadratic, solve_sec_tan};
use minball::{
    dual_solve, oracle_enumerate, oracle_subgradient, primal_solve, validate, Ball, Instance,
    SolveOptions, SolveResult, Vector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n)
        .map(|_| scale * rng.random_range(-1.0..1.0))
        .collect()
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    loop {
        let v = Vector::from_vec(random_point(rng, n, 1.0));
        if v.norm() > 1e-3 {
            return v.normalize();
        }
    }
}

fn coverage(x: &Vector, b: &Ball) -> f64 {
    (x - &b.center).norm() + b.radius
}

fn traced() -> SolveOptions {
    SolveOptions {
        trace: true,
        ..SolveOptions::default()
    }
}

/// Collects every terminal solution for the certification criterion.
#[derive(Default)]
struct Certifications {
    checked: usize,
    failures: Vec<String>,
    worst_margin: f64,
    worst_residual: f64,
}

impl Certifications {
    fn check(&mut self, label: &str, instance: &Instance, result: &SolveResult) {
        self.checked += 1;
        let z = result.ball.radius;
        match validate(instance, &result.ball, &result.support) {
            Ok(cert) => {
                let margin = cert.feasibility_margin / (1.0 + z);
                self.worst_margin = self.worst_margin.min(margin);
                self.worst_residual = self.worst_residual.max(cert.kkt_residual);
                if cert.feasibility_margin < -1e-7 * (1.0 + z) || cert.kkt_residual > 1e-6 {
                    self.failures.push(format!(
                        "{label}: margin {:.3e} residual {:.3e}",
                        cert.feasibility_margin, cert.kkt_residual
                    ));
                }
            }
            Err(e) => self.failures.push(format!("{label}: {e}")),
        }
    }
}

/// Closed-form optimum of two balls, neither inside the other.
fn two_ball_optimum(a: &Ball, b: &Ball) -> (Vector, f64) {
    let d = (&b.center - &a.center).norm();
    let z = 0.5 * (d + a.radius + b.radius);
    let x = &a.center + (&b.center - &a.center) * ((z - a.radius) / d);
    (x, z)
}

fn criterion_1(certs: &mut Certifications) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_z, mut worst_x) = (0.0_f64, 0.0_f64);
    let mut errors = Vec::new();
    for case in 0..50 {
        let n = [2, 5, 10][case % 3];
        let (a, b) = loop {
            let a = Ball::new(&random_point(&mut rng, n, 1.0), rng.random_range(0.0..0.6));
            let b = Ball::new(&random_point(&mut rng, n, 1.0), rng.random_range(0.0..0.6));
            if (&a.center - &b.center).norm() > (a.radius - b.radius).abs() + 1e-3 {
                break (a, b);
            }
        };
        let (x_ref, z_ref) = two_ball_optimum(&a, &b);
        let instance = Instance::new(n, vec![a, b]).expect("valid pair");
        for (name, solver) in [
            ("primal", primal_solve as fn(&Instance, &SolveOptions) -> _),
            ("dual", dual_solve),
        ] {
            match solver(&instance, &SolveOptions::default()) {
                Ok(r) => {
                    worst_z = worst_z.max((r.ball.radius - z_ref).abs());
                    worst_x = worst_x.max((&r.ball.center - &x_ref).norm());
                    certs.check(&format!("c1 case {case} {name}"), &instance, &r);
                }
                Err(e) => errors.push(format!("case {case} {name}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    let pass =
        errors.is_empty() && worst_z <= 1e-9 && worst_x <= 1e-9 && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "two-ball analytic: max |dz| {worst_z:.2e}, max |dx| {worst_x:.2e}, errors {}, {:.3}s",
            errors.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(certs: &mut Certifications) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_sub, mut worst_enum) = (0.0_f64, 0.0_f64);
    let mut errors = Vec::new();
    let mut enumerated = 0;
    for case in 0..30 {
        let n = rng.random_range(1..=5);
        let m = rng.random_range(2..=30);
        let balls = (0..m)
            .map(|_| Ball::new(&random_point(&mut rng, n, 1.0), 0.0))
            .collect();
        let instance = Instance::new(n, balls).expect("valid points");
        let sub = oracle_subgradient(&instance, 1_000_000, case as u64);
        let exact = if m <= 12 {
            enumerated += 1;
            match oracle_enumerate(&instance) {
                Ok(b) => Some(b),
                Err(e) => {
                    errors.push(format!("case {case} enumerate: {e}"));
                    None
                }
            }
        } else {
            None
        };
        for (name, solver) in [
            ("primal", primal_solve as fn(&Instance, &SolveOptions) -> _),
            ("dual", dual_solve),
        ] {
            match solver(&instance, &SolveOptions::default()) {
                Ok(r) => {
                    worst_sub = worst_sub.max((r.ball.radius - sub.radius).abs());
                    if let Some(e) = &exact {
                        worst_enum = worst_enum.max((r.ball.radius - e.radius).abs());
                    }
                    certs.check(&format!("c2 case {case} {name}"), &instance, &r);
                }
                Err(e) => errors.push(format!("case {case} {name}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = errors.is_empty()
        && worst_sub <= 1e-4
        && worst_enum <= 1e-8
        && elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "zero radii: max |dz| vs subgradient {worst_sub:.2e}, vs enumeration {worst_enum:.2e} ({enumerated} sets), errors {}, {:.2}s",
            errors.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn mixed_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.random_range(1..=10);
    let m = rng.random_range(2..=50);
    let shared = rng.random_range(0.05..0.4);
    let balls = (0..m)
        .map(|_| {
            let r = match rng.random_range(0..5) {
                0 => 0.0,
                1 => shared,
                _ => rng.random_range(0.0..0.5),
            };
            Ball::new(&random_point(rng, n, 1.0), r)
        })
        .collect();
    Instance::new(n, balls).expect("valid instance")
}

fn criteria_3_4(certs: &mut Certifications) -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_z, mut worst_x) = (0.0_f64, 0.0_f64);
    let (mut worst_up, mut worst_down, mut worst_gap) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut errors = Vec::new();
    let mut traces = 0;
    for case in 0..100 {
        let instance = mixed_instance(&mut rng);
        let primal = primal_solve(&instance, &traced());
        let dual = dual_solve(&instance, &traced());
        match (&primal, &dual) {
            (Ok(p), Ok(d)) => {
                let zp = p.ball.radius;
                worst_z = worst_z.max((zp - d.ball.radius).abs() / zp.abs().max(1e-300));
                let dx = (&p.ball.center - &d.ball.center).norm() / (1.0 + p.ball.center.norm());
                worst_x = worst_x.max(dx);
                for w in p.trace.windows(2) {
                    worst_up = worst_up.max(w[1].z - w[0].z);
                }
                for w in d.trace.windows(2) {
                    worst_down = worst_down.max(w[0].z - w[1].z);
                }
                traces += 2;
                worst_gap = worst_gap.max(d.ball.radius - zp);
                certs.check(&format!("c3 case {case} primal"), &instance, p);
                certs.check(&format!("c3 case {case} dual"), &instance, d);
            }
            _ => {
                if let Err(e) = &primal {
                    errors.push(format!("case {case} primal: {e}"));
                }
                if let Err(e) = &dual {
                    errors.push(format!("case {case} dual: {e}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass3 = errors.is_empty()
        && worst_z <= 1e-6
        && worst_x <= 1e-5
        && elapsed < Duration::from_secs(60);
    let c3 = outcome(
        pass3,
        format!(
            "primal/dual agreement: max rel |dz| {worst_z:.2e}, max scaled |dx| {worst_x:.2e}, errors {}, {:.2}s",
            errors.len(),
            elapsed.as_secs_f64()
        ),
    );
    let pass4 = errors.is_empty() && worst_up <= 1e-12 && worst_down <= 1e-12 && worst_gap <= 1e-8;
    let c4 = outcome(
        pass4,
        format!(
            "bound monotonicity over {traces} traces: max primal rise {worst_up:.2e}, max dual drop {worst_down:.2e}, max dual-primal gap {worst_gap:.2e}"
        ),
    );
    (c3, c4)
}

/// Instance whose centers are generated from a common point `x`, so that `x`
/// lies on every bisector of the set.
fn concurrent_balls(rng: &mut ChaCha8Rng, n: usize, s: usize) -> (Vec<Ball>, Vector, f64) {
    let x = Vector::from_vec(random_point(rng, n, 1.0));
    let z = rng.random_range(1.5..3.0);
    let mut radii: Vec<f64> = (0..s).map(|_| rng.random_range(0.0..1.0)).collect();
    radii.sort_by(|a, b| b.total_cmp(a));
    let balls = radii
        .iter()
        .map(|&r| {
            let dir = unit_vector(rng, n);
            let p = &x + dir * (z - r);
            Ball::new(p.as_slice(), r)
        })
        .collect();
    (balls, x, z)
}

fn spread(balls: &[Ball], y: &Vector) -> f64 {
    let vals: Vec<f64> = balls.iter().map(|b| coverage(y, b)).collect();
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

fn sample_parameters(conic: &ConicSection, count: usize) -> Vec<f64> {
    let (lo, hi) = match conic.kind {
        ConicKind::Hyperboloid => (-1.4, 1.4),
        ConicKind::Ellipsoid => (-PI, PI),
        ConicKind::Paraboloid => (-3.0, 3.0),
    };
    (0..count)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / count as f64)
        .collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tol = minball::Tolerances::default();
    let mut worst = 0.0_f64;
    let mut points = 0usize;
    let mut sets = 0usize;
    let mut failures = Vec::new();
    while sets < 200 {
        let n = rng.random_range(2..=8);
        let s = rng.random_range(2..=(n + 1).min(5));
        let (balls, x, _) = concurrent_balls(&mut rng, n, s);
        if tol.radii_equal(balls[0].radius, balls[s - 1].radius) {
            continue;
        }
        sets += 1;
        let refs: Vec<&Ball> = balls.iter().collect();
        let conic = match intersect_sequence(&refs, &tol) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("set {sets}: {e}"));
                continue;
            }
        };
        let samples: Vec<Vector> = if conic.surface_dim() == 0 {
            let mut v = vec![conic.vertex()];
            if conic.kind == ConicKind::Ellipsoid {
                v.push(&conic.center - &conic.axis * conic.a);
            }
            v
        } else {
            let inplane = conic.in_plane_component(&(&x - &conic.center));
            let u = if inplane.norm() > 1e-8 {
                inplane.normalize()
            } else {
                conic
                    .fallback_plane_vector()
                    .expect("surface has a plane vector")
            };
            let curve = parametrize_2d(&conic, &u).expect("valid plane vector");
            sample_parameters(&conic, 200)
                .into_iter()
                .map(|b| curve.point(b))
                .collect()
        };
        for y in samples {
            let z = balls.iter().map(|b| coverage(&y, b)).fold(0.0, f64::max);
            let err = spread(&balls, &y) / (1.0 + z);
            worst = worst.max(err);
            points += 1;
        }
    }

    let mut worst_equiv = 0.0_f64;
    let mut roots = 0usize;
    let mut triples = 0usize;
    while triples < 200 {
        let n = rng.random_range(2..=6);
        let (balls, x, _) = concurrent_balls(&mut rng, n, 3);
        if tol.radii_equal(balls[0].radius, balls[2].radius) {
            continue;
        }
        triples += 1;
        let plane = match build_pair_hyperplane([&balls[0], &balls[1], &balls[2]], &tol) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("triple {triples}: {e}"));
                continue;
            }
        };
        let sheet = match intersect_sequence(&[&balls[0], &balls[2]], &tol) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("triple {triples}: {e}"));
                continue;
            }
        };
        let inplane = sheet.in_plane_component(&(&x - &sheet.center));
        let mut directions = Vec::new();
        if inplane.norm() > 1e-8 {
            directions.push(inplane.normalize());
        }
        for _ in 0..3 {
            let r = sheet.in_plane_component(&unit_vector(&mut rng, n));
            if r.norm() > 1e-6 {
                directions.push(r.normalize());
            }
        }
        for u in directions {
            let curve = parametrize_2d(&sheet, &u).expect("valid plane vector");
            let g = |b: f64| plane.signed_distance(&curve.point(b));
            let grid = 4000;
            let (lo, hi) = (-FRAC_PI_2 + 1e-6, FRAC_PI_2 - 1e-6);
            let mut prev = (lo, g(lo));
            for i in 1..=grid {
                let b = lo + (hi - lo) * i as f64 / grid as f64;
                let cur = (b, g(b));
                if prev.1 == 0.0 || prev.1.signum() != cur.1.signum() {
                    let (mut a, mut c) = (prev.0, cur.0);
                    let ga = prev.1;
                    for _ in 0..200 {
                        let mid = 0.5 * (a + c);
                        if g(mid).signum() == ga.signum() && ga != 0.0 {
                            a = mid;
                        } else {
                            c = mid;
                        }
                    }
                    let y = curve.point(0.5 * (a + c));
                    let err = (coverage(&y, &balls[0]) - coverage(&y, &balls[1])).abs();
                    worst_equiv = worst_equiv.max(err);
                    roots += 1;
                }
                prev = cur;
            }
        }
    }
    let pass = failures.is_empty() && worst <= 1e-7 && worst_equiv <= 1e-6 && roots > 0;
    outcome(
        pass,
        format!(
            "conic membership: {sets} sets, {points} points, max scaled spread {worst:.2e}; hyperplane equivalence: {roots} roots, max error {worst_equiv:.2e}; failures {}",
            failures.len()
        ),
    )
}

/// Sign-change brackets of `f` on a uniform grid of `[lo, hi]`.
fn brackets(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut prev = (lo, f(lo));
    for i in 1..points {
        let t = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let v = f(t);
        if prev.1 != 0.0 && v != 0.0 && prev.1.signum() != v.signum() {
            out.push((prev.0, t));
        } else if v == 0.0 {
            out.push((t, t));
        }
        prev = (t, v);
    }
    out
}

fn covered(brackets: &[(f64, f64)], roots: &[f64], slack: f64) -> bool {
    brackets
        .iter()
        .all(|&(a, b)| roots.iter().any(|&r| r >= a - slack && r <= b + slack))
}

fn criterion_7() -> Outcome {
    const GRID: usize = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let triples: Vec<(f64, f64, f64)> = (0..1000)
        .map(|_| {
            (
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    let results: Vec<(usize, usize, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = triples
            .chunks(125)
            .map(|chunk| {
                scope.spawn(move || {
                    let (mut missed, mut spurious, mut worst) = (0usize, 0usize, 0.0_f64);
                    for &(a, b, c) in chunk {
                        let scale = a.abs() + b.abs() + c.abs();

                        let h = |t: f64| a + b * t.sin() - c * t.cos();
                        let found: Vec<f64> = solve_sec_tan(a, b, c)
                            .valid()
                            .iter()
                            .map(|r| r.beta)
                            .collect();
                        let edge = 1e-9;
                        let br = brackets(h, -FRAC_PI_2 + edge, FRAC_PI_2 - edge, GRID);
                        if !covered(&br, &found, 1e-6) {
                            missed += 1;
                        }
                        for &t in &found {
                            let r = h(t).abs() / scale;
                            worst = worst.max(r);
                            if r > 1e-9 || t.abs() >= FRAC_PI_2 {
                                spurious += 1;
                            }
                        }

                        let e = |t: f64| a * t.cos() + b * t.sin() - c;
                        let found: Vec<f64> = solve_cos_sin(a, b, c)
                            .to_vec()
                            .iter()
                            .map(|r| r.beta)
                            .collect();
                        let br = brackets(e, -PI, PI, GRID);
                        let wrapped: Vec<f64> = found
                            .iter()
                            .flat_map(|&t| [t, t - 2.0 * PI, t + 2.0 * PI])
                            .collect();
                        if !covered(&br, &wrapped, 1e-6) {
                            missed += 1;
                        }
                        for &t in &found {
                            let r = e(t).abs() / scale;
                            worst = worst.max(r);
                            if r > 1e-9 {
                                spurious += 1;
                            }
                        }

                        let q = |t: f64| a * t * t + b * t - c;
                        let found = solve_parabola_quadratic(a, b, c);
                        let br = brackets(q, -50.0, 50.0, GRID);
                        if !covered(&br, &found, 1e-6) {
                            missed += 1;
                        }
                        for &t in &found {
                            let r = q(t).abs()
                                / (a.abs() * t * t + b.abs() * t.abs() + c.abs()).max(1e-300);
                            worst = worst.max(r);
                            if r > 1e-9 {
                                spurious += 1;
                            }
                        }
                    }
                    (missed, spurious, worst)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker"))
            .collect()
    });
    let missed: usize = results.iter().map(|r| r.0).sum();
    let spurious: usize = results.iter().map(|r| r.1).sum();
    let worst = results.iter().map(|r| r.2).fold(0.0, f64::max);
    outcome(
        missed == 0 && spurious == 0 && worst <= 1e-9,
        format!("scalar solvers on 1000 triples: missed {missed}, spurious {spurious}, max residual {worst:.2e}"),
    )
}

/// `k` balls touching a common sphere from inside plus optional interior balls.
fn cocircular(rng: &mut ChaCha8Rng, n: usize, k: usize, extra: usize, radius: f64) -> Instance {
    let center = Vector::from_vec(random_point(rng, n, 1.0));
    let mut balls: Vec<Ball> = (0..k)
        .map(|_| {
            let p = &center + unit_vector(rng, n) * (1.0 - radius);
            Ball::new(p.as_slice(), radius)
        })
        .collect();
    for _ in 0..extra {
        let p = &center + unit_vector(rng, n) * rng.random_range(0.0..0.3);
        balls.push(Ball::new(p.as_slice(), rng.random_range(0.0..0.2)));
    }
    Instance::new(n, balls).expect("valid instance")
}

/// Points of a regular simplex plus the antipode of one vertex, all on the unit sphere.
fn simplex_with_antipode(n: usize) -> Instance {
    let mut pts: Vec<Vector> = (0..n)
        .map(|i| {
            let mut e = Vector::zeros(n + 1);
            e[i] = 1.0;
            e
        })
        .collect();
    let mut last = Vector::zeros(n + 1);
    last[n] = 1.0;
    pts.push(last);
    let centroid = pts.iter().fold(Vector::zeros(n + 1), |acc, p| acc + p) / (n + 1) as f64;
    let shifted: Vec<Vector> = pts.iter().map(|p| p - &centroid).collect();
    let basis = minball::linalg::orthonormal_basis(&shifted, 1e-12);
    let mut coords: Vec<Vector> = shifted
        .iter()
        .map(|p| Vector::from_iterator(n, basis.iter().map(|b| b.dot(p))))
        .collect();
    let scale = coords[0].norm();
    for c in &mut coords {
        *c /= scale;
    }
    let antipode = -&coords[0];
    coords.push(antipode);
    Instance::new(
        n,
        coords
            .iter()
            .map(|c| Ball::new(c.as_slice(), 0.0))
            .collect(),
    )
    .expect("valid instance")
}

fn criterion_8(certs: &mut Certifications) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut instances = Vec::new();
    for n in 2..=5 {
        instances.push(simplex_with_antipode(n));
        for k in 3..=n + 2 {
            for &radius in &[0.0, 0.1] {
                instances.push(cocircular(&mut rng, n, k, 0, radius));
                instances.push(cocircular(&mut rng, n, k, 5, radius));
            }
        }
    }
    let mut errors = Vec::new();
    let mut runs = 0;
    for (i, instance) in instances.iter().enumerate() {
        for (name, solver) in [
            ("primal", primal_solve as fn(&Instance, &SolveOptions) -> _),
            ("dual", dual_solve),
        ] {
            runs += 1;
            match solver(instance, &SolveOptions::default()) {
                Ok(r) => {
                    let before = certs.failures.len();
                    certs.check(&format!("c8 instance {i} {name}"), instance, &r);
                    if certs.failures.len() > before {
                        errors.push(format!("instance {i} {name}: not certified"));
                    }
                }
                Err(e) => errors.push(format!("instance {i} {name}: {e}")),
            }
        }
    }
    outcome(
        errors.is_empty(),
        format!(
            "co-circular degeneracy: {runs} runs, failures {}{}",
            errors.len(),
            first(&errors)
        ),
    )
}

fn criterion_9(certs: &mut Certifications) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (n, m) = (50, 1000);
    let balls = (0..m)
        .map(|_| Ball::new(&random_point(&mut rng, n, 1.0), rng.random_range(0.0..0.5)))
        .collect();
    let instance = Instance::new(n, balls).expect("valid instance");
    let start = Instant::now();
    let result = primal_solve(&instance, &SolveOptions::default());
    let elapsed = start.elapsed();
    match result {
        Ok(r) => {
            let before = certs.failures.len();
            certs.check("c9 primal", &instance, &r);
            let certified = certs.failures.len() == before;
            outcome(
                certified && elapsed < Duration::from_secs(10),
                format!(
                    "scale n=50 m=1000: primal z {:.12}, {} iterations, certified {certified}, {:.2}s",
                    r.ball.radius,
                    r.iterations,
                    elapsed.as_secs_f64()
                ),
            )
        }
        Err(e) => outcome(false, format!("scale n=50 m=1000: {e}")),
    }
}

fn first(errors: &[String]) -> String {
    errors
        .first()
        .map(|e| format!(" (first: {e})"))
        .unwrap_or_default()
}

fn main() {
    let mut certs = Certifications {
        worst_margin: f64::INFINITY,
        ..Certifications::default()
    };
    let mut results = Vec::new();
    results.push((1, criterion_1(&mut certs)));
    results.push((2, criterion_2(&mut certs)));
    let (c3, c4) = criteria_3_4(&mut certs);
    results.push((3, c3));
    results.push((4, c4));
    let c6 = criterion_6();
    let c7 = criterion_7();
    let c8 = criterion_8(&mut certs);
    let c9 = criterion_9(&mut certs);
    let c5 = outcome(
        certs.failures.is_empty(),
        format!(
            "KKT certification of {} terminal solutions: worst scaled margin {:.2e}, worst residual {:.2e}, failures {}{}",
            certs.checked,
            certs.worst_margin.min(0.0),
            certs.worst_residual,
            certs.failures.len(),
            first(&certs.failures)
        ),
    );
    results.push((5, c5));
    results.push((6, c6));
    results.push((7, c7));
    results.push((8, c8));
    results.push((9, c9));

    let mut failed = 0;
    for (id, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {id}: {tag} {}", o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
