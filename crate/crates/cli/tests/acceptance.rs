//! Acceptance suite: one PASS/FAIL line per criterion, each run at its stated
//! tolerance and time budget. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilflow::limits::{
    curve_coset, normal_form, stacked_curve, DilationFamily, InputSet, MultiCoset, MultiCosetFamily, Piece, PolyVec,
};
use nilflow::numeric::{verify_convergence, EmbeddingConfig, Schedule, Tolerances, TorusModel};
use nilflow::qlinalg::{coset_reduce, dot, hnf_rational, is_zero_vec, rational_closure, KVec, LatticeBasis, Subspace};
use nilflow::unipotent::{exp, log, GroupElement, KMatrix};
use nilflow::{FieldRef, NumberField, Rational, Scalar};
use nilflow_cli::predict::{predict, Analysis};
use nilflow_cli::verify::{certify_nonconvergence, verify};
use nilflow_cli::{bundled, Scenario};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scenario(name: &str) -> Result<Scenario, String> {
    bundled(name).ok_or_else(|| format!("missing bundled scenario {name}"))
}

fn err(e: impl std::fmt::Display) -> String {
    format!("{e:#}")
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn sqrt2() -> FieldRef {
    NumberField::sqrt(2).expect("x² − 2 defines a field")
}

/// `a + bθ` with `|a|, |b| ≤ h`.
fn random_scalar(rng: &mut ChaCha8Rng, k: &FieldRef, h: i64) -> Scalar {
    let coeffs = (0..k.degree()).map(|_| q(rng.gen_range(-h..=h))).collect();
    Scalar::from_coeffs(k, coeffs).expect("degree-many coefficients")
}

/// A scalar that is zero, a small rational, or has a `θ` part, roughly evenly.
fn mixed_scalar(rng: &mut ChaCha8Rng, k: &FieldRef) -> Scalar {
    match rng.gen_range(0..4) {
        0 => Scalar::zero(k),
        1 => Scalar::from_int(k, rng.gen_range(-2..=2)),
        2 => Scalar::from_rational(k, Rational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into())),
        _ => random_scalar(rng, k, 2),
    }
}

fn criterion_translates() -> Outcome {
    let s = scenario("sample64_translates")?;
    let Analysis::Abelian(a) = predict(&s).map_err(err)? else {
        return Err("expected an abelian analysis".into());
    };
    let k = &s.field;
    let e1 = Subspace::span(k, 2, &[vec![Scalar::one(k), Scalar::zero(k)]]).map_err(err)?;
    let e2 = Subspace::span(k, 2, &[vec![Scalar::zero(k), Scalar::one(k)]]).map_err(err)?;
    check(a.family.closures == vec![e1.clone()], || format!("closure {:?}, expected span{{e1}}", a.family.closures))?;
    check(a.family.vclosed == e2, || format!("V closed {:?}, expected span{{e2}}", a.family.vclosed))?;
    check(s.embedding.sample_density == 200.0, || "density must be 200 per unit".into())?;
    check(s.schedule == Schedule::default(), || "schedule must be 10, 10^1.5, …, 10^4".into())?;
    let r = verify(&s).map_err(err)?;
    let sound = r.torus.tail_sound_max.ok_or("no soundness distances")?;
    let worst = r.torus.max_target_dist.ok_or("no completeness targets")?;
    check(sound < 0.02, || format!("tail sound_dH {sound} ≥ 0.02"))?;
    check(r.torus.targets == 8, || format!("{} targets, expected an 8-point grid", r.torus.targets))?;
    check(worst <= 0.05, || format!("worst target distance {worst} > 0.05"))?;
    Ok(format!("tail sound_dH {sound:.4}, worst of 8 targets {worst:.4}"))
}

fn criterion_parabola() -> Outcome {
    let s = scenario("segment_parabola_dilation")?;
    let c = predict(&s).map_err(err)?.classification();
    check(c.as_str() == "ConvergesStronglyToFull", || format!("classification {}", c.as_str()))?;
    let r = verify(&s).map_err(err)?;
    let mut worst: f64 = 0.0;
    for row in &r.torus.rows {
        check(row.t >= 200.0, || format!("schedule contains t = {} < 200", row.t))?;
        check(row.samples_used >= 10_000, || format!("only {} samples at t = {}", row.samples_used, row.t))?;
        check(row.fullspace_dh < 0.05, || format!("d_H to full grid {} at t = {}", row.fullspace_dh, row.t))?;
        worst = worst.max(row.fullspace_dh);
    }
    Ok(format!("max d_H to the full torus {worst:.4} over t ∈ [200, 1e4]"))
}

fn criterion_interval() -> Outcome {
    let s = scenario("sample63_interval")?;
    let r = verify(&s).map_err(err)?;
    check(r.torus.verdicts.sound == Some(true), || "sound verdict failed for Γ = Z".into())?;
    let full = r.torus.verdicts.fullspace.as_ref().ok_or("no full-space verdict")?;
    check(full.predicted_full && full.observed_full, || "limit is not the full circle".into())?;
    let mesh = 1.0 / s.embedding.sample_density;
    let unit = r.torus.rows.iter().map(|x| x.fullspace_dh).fold(0.0, f64::max);
    check(unit <= mesh, || format!("d_H to R/Z is {unit}, above the mesh {mesh}"))?;

    let s3 = s.with_lattice_scale(3).map_err(err)?;
    let r3 = verify(&s3).map_err(err)?;
    let floor = r3.torus.rows.iter().map(|x| x.fullspace_dh).fold(f64::INFINITY, f64::min);
    check(floor >= 0.4, || format!("d_H to R/3Z drops to {floor} < 0.4"))?;

    let c = predict(&s).map_err(err)?.classification();
    let n = certify_nonconvergence(&s, c, 5).map_err(err)?;
    check(matches!(n, Some(n) if n <= 3), || format!("nonconvergence index {n:?}, expected N ≤ 3"))?;
    Ok(format!("Γ=Z: d_H {unit:.4} ≤ mesh {mesh}; Γ₀=3Z: min d_H {floor:.4}; index N = {}", n.unwrap_or(0)))
}

fn criterion_heisenberg() -> Outcome {
    let budget = Duration::from_secs(60);
    let start = Instant::now();
    let s = scenario("heis_orbit_irrational")?;
    let c = predict(&s).map_err(err)?.classification();
    check(c.as_str() == "ConvergesStronglyToFull", || format!("irrational direction classified {}", c.as_str()))?;
    let r = verify(&s).map_err(err)?;
    let h = r.heis.as_ref().ok_or("no nilmanifold report")?;
    check(h.grid == 20, || format!("grid side {}, expected 20", h.grid))?;
    let row = h.rows.iter().find(|x| (x.t - 1e3).abs() < 1e-6).ok_or("schedule lacks t = 10^3")?;
    check(row.samples_used >= 100_000, || format!("{} samples at t = 10^3", row.samples_used))?;
    check(row.fullspace_dh < 0.1, || format!("d_H {} ≥ 0.1 at t = 10^3", row.fullspace_dh))?;
    let first = start.elapsed();
    check(first < budget, || format!("irrational run took {first:?}"))?;

    let start = Instant::now();
    let s = scenario("heis_orbit_rational")?;
    let r = verify(&s).map_err(err)?;
    let h2 = r.heis.as_ref().ok_or("no nilmanifold report")?;
    let floor = h2.rows.iter().map(|x| x.fullspace_dh).fold(f64::INFINITY, f64::min);
    check(floor >= 0.2, || format!("rational orbit comes within {floor} of the full grid"))?;
    let second = start.elapsed();
    check(second < budget, || format!("rational run took {second:?}"))?;
    Ok(format!(
        "(1,√2): d_H {:.4} at t=1e3 with {} samples; (1,1): min d_H {floor:.4}",
        row.fullspace_dh, row.samples_used
    ))
}

/// Rank over `Q` by Gauss-Jordan elimination on a copy.
fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    let zero = q(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != zero) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != zero {
                let f = &rows[i][col] / &pivot;
                let pr = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Integer rows whose common kernel over `Q` is the set of rational
/// covectors vanishing on `L`: the rational and `θ` parts of each basis vector.
fn parts_matrix(l: &Subspace) -> Vec<Vec<i64>> {
    let d = l.field().degree();
    let mut out = Vec::new();
    for v in l.basis() {
        for part in 0..d {
            let row: Vec<Rational> = v.iter().map(|x| x.rational_coords()[part].clone()).collect();
            let lcm = row.iter().fold(1i64, |acc, x| {
                let den = i64::try_from(x.denom()).expect("small denominators");
                acc / gcd(acc, den) * den
            });
            out.push(row.iter().map(|x| i64::try_from((x * q(lcm)).to_integer()).expect("small entries")).collect());
        }
    }
    out
}

/// Primitive integer covectors of height at most `h` killing every row.
fn small_annihilators(rows: &[Vec<i64>], m: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut c = vec![-h; m];
    loop {
        let first = c.iter().find(|&&x| x != 0);
        let primitive = c.iter().fold(0, |g, &x| gcd(g, x)) == 1;
        if matches!(first, Some(&x) if x > 0) && primitive {
            if rows.iter().all(|r| r.iter().zip(&c).map(|(a, b)| a * b).sum::<i64>() == 0) {
                out.push(c.clone());
            }
        }
        let mut i = 0;
        while i < m && c[i] == h {
            c[i] = -h;
            i += 1;
        }
        if i == m {
            return out;
        }
        c[i] += 1;
    }
}

fn random_subspace_instance(rng: &mut ChaCha8Rng, k: &FieldRef) -> (usize, Vec<KVec>) {
    let m = rng.gen_range(1..=4);
    let r = rng.gen_range(1..=m);
    let vectors = if rng.gen_bool(0.5) {
        // Combinations of a small rational subspace, so the closure is often proper.
        let s = rng.gen_range(r..=m);
        let rational: Vec<Vec<i64>> = (0..s).map(|_| (0..m).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        (0..r)
            .map(|_| {
                let coeffs: Vec<Scalar> = (0..s).map(|_| random_scalar(rng, k, 3)).collect();
                (0..m)
                    .map(|j| {
                        rational.iter().zip(&coeffs).fold(Scalar::zero(k), |acc, (row, c)| &acc + &c.scale(&q(row[j])))
                    })
                    .collect()
            })
            .collect()
    } else {
        (0..r).map(|_| (0..m).map(|_| random_scalar(rng, k, 10)).collect()).collect()
    };
    (m, vectors)
}

fn criterion_closure_oracle() -> Outcome {
    let k = sqrt2();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut conclusive, mut instances) = (0, 0);
    while instances < 100 {
        let (m, vectors) = random_subspace_instance(&mut rng, &k);
        let l = Subspace::span(&k, m, &vectors).map_err(err)?;
        if l.is_zero() {
            continue;
        }
        instances += 1;
        let lattice = LatticeBasis::integer(&k, m);
        let closure = rational_closure(&l, &lattice).map_err(err)?;

        check(l.is_subspace_of(&closure), || format!("closure not extensive on {l:?}"))?;
        let again = rational_closure(&closure, &lattice).map_err(err)?;
        check(again == closure, || format!("closure not idempotent on {l:?}"))?;
        let smaller = Subspace::span(&k, m, &vectors[..1]).map_err(err)?;
        let cs = rational_closure(&smaller, &lattice).map_err(err)?;
        check(cs.is_subspace_of(&closure), || format!("closure not monotone on {l:?}"))?;

        let parts = parts_matrix(&l);
        let found = small_annihilators(&parts, m, 10);
        let found_q: Vec<Vec<Rational>> = found.iter().map(|c| c.iter().map(|&x| q(x)).collect()).collect();
        let span_dim = rational_rank(&found_q);
        let parts_q: Vec<Vec<Rational>> = parts.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        if span_dim != m - rational_rank(&parts_q) {
            continue;
        }
        conclusive += 1;
        check(closure.rank() == m - span_dim, || format!("closure rank {} vs oracle {} on {l:?}", closure.rank(), m - span_dim))?;
        for c in &found {
            let cv: KVec = c.iter().map(|&x| Scalar::from_int(&k, x)).collect();
            for w in closure.basis() {
                check(dot(&cv, w).is_zero(), || format!("oracle covector {c:?} does not kill the closure of {l:?}"))?;
            }
        }
    }
    check(conclusive >= 50, || format!("only {conclusive} of 100 instances were conclusive"))?;
    Ok(format!("{conclusive}/100 conclusive instances agree; closure laws hold on all 100"))
}

fn random_nilpotent(rng: &mut ChaCha8Rng, k: &FieldRef, n: usize) -> KMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if j > i { mixed_scalar(rng, k) } else { Scalar::zero(k) }).collect())
        .collect()
}

fn field_laws(rng: &mut ChaCha8Rng, k: &FieldRef, count: usize) -> Result<(), String> {
    let xs: Vec<Scalar> = (0..count).map(|_| random_scalar(rng, k, 20)).collect();
    for w in xs.windows(3).step_by(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        check(&(a + b) + c == a + &(b + c), || format!("addition not associative on {a}, {b}, {c}"))?;
        check(&(a * b) * c == a * &(b * c), || format!("multiplication not associative on {a}, {b}, {c}"))?;
        check(a * &(b + c) == &(a * b) + &(a * c), || format!("not distributive on {a}, {b}, {c}"))?;
        check(a * b == b * a, || format!("not commutative on {a}, {b}"))?;
        check((a + &(-a)).is_zero(), || format!("no additive inverse for {a}"))?;
        if !a.is_zero() {
            let inv = a.inv().map_err(err)?;
            check((a * &inv).is_one(), || format!("{a} times its inverse is not 1"))?;
        }
    }
    Ok(())
}

fn criterion_exact_algebra() -> Outcome {
    let k = sqrt2();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let a = random_nilpotent(&mut rng, &k, n);
        let g = exp(&a).map_err(err)?;
        check(log(&g) == a, || format!("log(exp(A)) ≠ A for {a:?}"))?;
        let mut u = random_nilpotent(&mut rng, &k, n);
        for (i, row) in u.iter_mut().enumerate() {
            row[i] = Scalar::one(&k);
        }
        let h = GroupElement::new(u).map_err(err)?;
        check(exp(&log(&h)).map_err(err)? == h, || format!("exp(log(g)) ≠ g for {h:?}"))?;
    }

    let cubic = NumberField::new(vec![q(-2), q(0), q(0), q(1)], q(1), q(2)).map_err(err)?;
    field_laws(&mut rng, &k, 5_001)?;
    field_laws(&mut rng, &cubic, 5_001)?;

    for _ in 0..100 {
        let m = rng.gen_range(1..=4);
        let count = rng.gen_range(m..=m + 2);
        let gens: Vec<Vec<Rational>> = loop {
            let g: Vec<Vec<Rational>> = (0..count)
                .map(|_| (0..m).map(|_| Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=2).into())).collect())
                .collect();
            if rational_rank(&g) == m {
                break g;
            }
        };
        let mut moved = gens.clone();
        for _ in 0..20 {
            let i = rng.gen_range(0..count);
            let j = rng.gen_range(0..count);
            match rng.gen_range(0..3) {
                0 if i != j => {
                    let f = q(rng.gen_range(-3..=3));
                    let src = moved[j].clone();
                    for (x, y) in moved[i].iter_mut().zip(&src) {
                        *x = &*x + &(&f * y);
                    }
                }
                1 => moved.swap(i, j),
                _ => {
                    for x in moved[i].iter_mut() {
                        *x = -x.clone();
                    }
                }
            }
        }
        let a = hnf_rational(&gens).map_err(err)?;
        let b = hnf_rational(&moved).map_err(err)?;
        check(a == b, || format!("HNF changed under unimodular moves: {gens:?}"))?;
    }
    Ok("200 exp/log round trips, 10⁴ scalars over Q(√2) and Q(∛2), 100 HNF invariance checks".into())
}

fn random_point(rng: &mut ChaCha8Rng, k: &FieldRef, dim: usize) -> KVec {
    (0..dim).map(|_| Scalar::from_rational(k, Rational::new(rng.gen_range(-4..=4).into(), 2.into()))).collect()
}

fn random_dilation_scenario(rng: &mut ChaCha8Rng, k: &FieldRef) -> (DilationFamily, InputSet) {
    let m = rng.gen_range(1..=3);
    let dim = rng.gen_range(1..=2);
    let degree = rng.gen_range(1..=3);
    let matrices: Vec<Vec<KVec>> = (0..degree)
        .map(|i| loop {
            let a: Vec<KVec> = (0..m).map(|_| (0..dim).map(|_| mixed_scalar(rng, k)).collect()).collect();
            if i + 1 < degree || a.iter().any(|r| !is_zero_vec(r)) {
                break a;
            }
        })
        .collect();
    let dil = DilationFamily::new(k, matrices).expect("consistent shapes");
    let pieces = (0..rng.gen_range(1..=2))
        .map(|_| {
            if rng.gen_bool(0.4) {
                Piece::Points((0..rng.gen_range(1..=3)).map(|_| random_point(rng, k, dim)).collect())
            } else {
                let mut vs: Vec<KVec> = Vec::new();
                while vs.len() < dim + 1 {
                    let v = random_point(rng, k, dim);
                    if !vs.contains(&v) {
                        vs.push(v);
                    }
                }
                Piece::Polytope(vs)
            }
        })
        .collect();
    (dil, InputSet::new(pieces).expect("distinct vertices"))
}

fn criterion_clause_exactness() -> Outcome {
    let k = sqrt2();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let schedule = Schedule::new(vec![1e3, 10f64.powf(3.5), 1e4]).map_err(err)?;
    let cfg = EmbeddingConfig { sample_density: 60.0, sample_cap: 300_000, grid_cap: 150_000, ..EmbeddingConfig::default() };
    let tol = Tolerances { sound: 0.05, ..Tolerances::default() };
    let mut worst: f64 = 0.0;
    for case in 0..25 {
        let (dil, input) = random_dilation_scenario(&mut rng, &k);
        let nf = normal_form(&dil, &input).map_err(err)?;
        for _ in 0..10 {
            let t = Scalar::from_rational(&k, Rational::new(rng.gen_range(-60..=60).into(), rng.gen_range(1..=7).into()));
            for piece in input.pieces() {
                for v in piece.points() {
                    let image = dil.eval(&t, v);
                    let inside = nf.cosets.iter().any(|c| {
                        let offset: KVec = image.iter().zip(c.p.eval(&t)).map(|(a, b)| a - &b).collect();
                        coset_reduce(&offset, &c.l).map_or(false, |r| is_zero_vec(&r.translate))
                    });
                    check(inside, || format!("case {case}: ρ_t({v:?}) at t = {t} lies in no coset"))?;
                }
            }
        }
        let lattice = LatticeBasis::integer(&k, dil.m());
        let family = nilflow::limits::limit_family(&nf, &lattice).map_err(err)?;
        let model = TorusModel::dilation(&lattice, &dil, &input, Some((&nf, &family)), &cfg).map_err(err)?;
        let report = verify_convergence(&model, &schedule, &cfg, &tol).map_err(err)?;
        for row in &report.rows {
            let d = row.sound_dh.ok_or("missing soundness distance")?;
            check(d < 0.05, || format!("case {case}: sound_dH {d} at t = {} (m = {}, degree {})", row.t, dil.m(), dil.degree()))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("25 scenarios × 10 times exact; worst sound_dH {worst:.4} for t ≥ 1e3"))
}

fn random_poly(rng: &mut ChaCha8Rng, k: &FieldRef, m: usize) -> PolyVec {
    let degree = rng.gen_range(0..=3);
    PolyVec::new((0..=degree).map(|_| (0..m).map(|_| mixed_scalar(rng, k)).collect()).collect())
}

fn criterion_curve_coset() -> Outcome {
    let k = sqrt2();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut killed, mut moved) = (0, 0);
    for case in 0..100 {
        let m = rng.gen_range(1..=3);
        let cosets = (0..rng.gen_range(1..=3))
            .map(|_| {
                let dirs: Vec<KVec> = (0..rng.gen_range(0..=m)).map(|_| random_point(&mut rng, &k, m)).collect();
                let l = Subspace::span(&k, m, &dirs).expect("consistent dimensions");
                MultiCoset::new(random_poly(&mut rng, &k, m), l)
            })
            .collect();
        let family = MultiCosetFamily { cosets };
        let (cbar, v) = curve_coset(&family);
        let sigma = stacked_curve(&family);
        let big_m = sigma.ambient_dim();
        let mut annihilators: Vec<KVec> = v.annihilator().basis().to_vec();
        let basis = annihilators.clone();
        for _ in 0..3 {
            if basis.is_empty() {
                break;
            }
            let combo = basis.iter().fold(vec![Scalar::zero(&k); big_m], |acc, b| {
                let c = random_scalar(&mut rng, &k, 3);
                acc.iter().zip(b).map(|(x, y)| x + &(&c * y)).collect()
            });
            annihilators.push(combo);
        }
        for c in &annihilators {
            check(dot(c, &sigma.coeffs()[0]) == dot(c, &cbar), || format!("case {case}: constant term moved"))?;
            for coeff in &sigma.coeffs()[1..] {
                check(dot(c, coeff).is_zero(), || format!("case {case}: annihilator {c:?} leaves a nonconstant term"))?;
            }
            killed += 1;
        }
        for _ in 0..5 {
            let c: KVec = (0..big_m).map(|_| random_scalar(&mut rng, &k, 3)).collect();
            if v.basis().iter().all(|b| dot(&c, b).is_zero()) {
                continue;
            }
            let nonconstant = sigma.coeffs()[1..].iter().any(|coeff| !dot(&c, coeff).is_zero());
            check(nonconstant, || format!("case {case}: non-annihilator {c:?} gives a constant polynomial"))?;
            moved += 1;
        }
    }
    Ok(format!("100 curves: {killed} annihilators kill σ − c̄, {moved} non-annihilators stay nonconstant"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    // libtest flags such as `--nocapture` are accepted and ignored.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria = [
        Criterion { id: 1, name: "translate family limits", budget: Duration::from_secs(10), run: criterion_translates },
        Criterion { id: 2, name: "line-direction sweep fills the torus", budget: Duration::from_secs(30), run: criterion_parabola },
        Criterion { id: 3, name: "interval: strong vs plain convergence", budget: Duration::from_secs(5), run: criterion_interval },
        Criterion { id: 4, name: "Heisenberg orbit segments", budget: Duration::from_secs(120), run: criterion_heisenberg },
        Criterion { id: 5, name: "rational closure vs covector oracle", budget: Duration::from_secs(20), run: criterion_closure_oracle },
        Criterion { id: 6, name: "exact algebra suite", budget: Duration::from_secs(30), run: criterion_exact_algebra },
        Criterion { id: 7, name: "multi-coset containment and soundness", budget: Duration::from_secs(120), run: criterion_clause_exactness },
        Criterion { id: 8, name: "curve coset annihilator oracle", budget: Duration::from_secs(5), run: criterion_curve_coset },
    ];
    let mut failed = 0;
    for c in criteria.iter() {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str()) || f == &c.id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            check(elapsed <= c.budget, || format!("{detail}; took {elapsed:.1?}, budget {:?}", c.budget))?;
            Ok(detail)
        });
        match outcome {
            Ok(detail) => println!("PASS [{}] {}: {detail} ({elapsed:.1?})", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {}: {why} ({elapsed:.1?})", c.id, c.name);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
