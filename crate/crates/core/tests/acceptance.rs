//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p pexider --test acceptance`.

use std::process::ExitCode;
use std::sync::Arc;

use pexider::families::{
    build_affine, paper_example, reconstruct_tuple, solve_for_g, Anchors, AuxCase, AuxSpec, PartiallyAffineParams, SolutionTuple,
};
use pexider::func::diagonal_solve;
use pexider::geometry::{lemma_checks, sumset_image};
use pexider::sampling::{random_affine_params, random_interval, random_same_sense_pair, random_subinterval, rng};
use pexider::verify::{
    check_const, classify_affine_intervals, derived_profiles, extension_invariants, peter_triple, residual_main,
    residual_system, PeterSpec, Verdict,
};
use pexider::{Error, Expr, Fn1D, OpenInterval};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn iv(lo: f64, hi: f64) -> OpenInterval {
    OpenInterval::new(lo, hi).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<T>(r: pexider::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// Independent transcription of the example formulas.
fn ex_big_f(x: f64) -> f64 {
    if x <= 1.0 {
        2.0 * x * x + 2.0
    } else {
        4.0 * x
    }
}
fn ex_f(x: f64) -> f64 {
    if x <= 2.0 {
        x
    } else {
        0.75 * x * x - 2.0 * x + 3.0
    }
}
fn ex_g(x: f64) -> f64 {
    if x <= 2.0 {
        x
    } else {
        0.25 * x * x + 1.0
    }
}
fn ex_big_g(u: f64) -> f64 {
    if u <= 2.0 {
        0.5 * u * u + u + 2.0
    } else {
        3.0 * u
    }
}

fn example_fidelity() -> Outcome {
    let t = paper_example();
    let spots = [
        (t.big_f().eval(0.5), 2.5),
        (t.big_f().eval(2.0), 8.0),
        (t.f1().eval(3.0), 3.75),
        (t.g2().eval(3.0), 3.25),
        (t.big_g().eval(4.25), 12.75),
    ];
    for (got, want) in spots {
        let got = e2s(got)?;
        ensure(got == want, || format!("spot value {got} != {want}"))?;
    }
    let mut worst: f64 = 0.0;
    for x in iv(0.0, 4.0).grid(401, 1e-3) {
        for (f, o) in [
            (t.big_f(), ex_big_f(x)),
            (t.f1(), ex_f(x)),
            (t.f2(), ex_f(x)),
            (t.g1(), ex_g(x)),
            (t.g2(), ex_g(x)),
        ] {
            worst = worst.max((e2s(f.eval(x))? - o).abs());
        }
    }
    for u in iv(0.0, 10.0).grid(401, 1e-3) {
        worst = worst.max((e2s(t.big_g().eval(u))? - ex_big_g(u)).abs());
    }
    ensure(worst < 1e-13, || format!("formula deviation {worst:e}"))?;
    let r = e2s(residual_main(&t, 200, 1e-3))?;
    ensure(r.max_abs < 1e-12, || format!("residual {:e} on 200²", r.max_abs))?;
    Ok(format!("spot values exact, formula deviation {worst:.1e}, residual {:.1e} on 200²", r.max_abs))
}

fn constants_and_perturbations() -> Outcome {
    let p = PartiallyAffineParams::example();
    let base = check_const(&p);
    ensure(base.iter().all(|c| c.pass), || format!("example constants fail: {base:?}"))?;
    type Set = fn(&mut PartiallyAffineParams, f64);
    let active: [(&str, Set); 11] = [
        ("A", |p, h| p.a += h),
        ("α", |p, h| p.alpha += h),
        ("B", |p, h| p.b += h),
        ("β1", |p, h| p.beta[0] += h),
        ("β2", |p, h| p.beta[1] += h),
        ("C⁻", |p, h| p.c_minus += h),
        ("D⁻", |p, h| p.d_minus += h),
        ("γ1⁻", |p, h| p.gamma_minus[0] += h),
        ("γ2⁻", |p, h| p.gamma_minus[1] += h),
        ("δ1⁻", |p, h| p.delta_minus[0] += h),
        ("δ2⁻", |p, h| p.delta_minus[1] += h),
    ];
    for (name, set) in active {
        let mut q = p.clone();
        set(&mut q, 1e-3);
        let failed: Vec<String> = check_const(&q).into_iter().filter(|c| !c.pass).map(|c| c.identity).collect();
        ensure(!failed.is_empty(), || format!("perturbing {name} went undetected"))?;
    }
    // K⁺ is empty for the example, so its constants are placeholders.
    let mut q = p.clone();
    q.c_plus += 1e-3;
    q.d_plus += 1e-3;
    ensure(check_const(&q).iter().all(|c| c.pass), || "placeholder perturbation was flagged".into())?;
    Ok(format!("{} identities hold; all 11 active perturbations flagged", base.len()))
}

fn affine_family() -> Outcome {
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let p = random_affine_params(&mut r);
        let t = e2s(build_affine(&p)).map_err(|e| format!("instance {k}: {e}"))?;
        let rep = e2s(residual_main(&t, 50, 1e-3))?;
        ensure(rep.max_abs < 1e-12, || format!("instance {k}: residual {:e}", rep.max_abs))?;
        worst = worst.max(rep.max_abs);
    }
    Ok(format!("50 instances, worst residual {worst:.1e} on 50²"))
}

fn profile_systems() -> Outcome {
    let mut worst: f64 = 0.0;
    for case in AuxCase::ALL {
        let p = e2s(AuxSpec::corpus(case).build())?;
        let i = p.interval();
        for x in i.grid(4096, 0.0) {
            let (p1, p2) = (p.psi1.eval_raw(x), p.psi2.eval_raw(x));
            ensure((p2 + p1) * (p2 - p1) > 0.0, || format!("case {}: ψ2² - ψ1² ≤ 0 at {x}", case.label()))?;
        }
        let (a, b) = e2s(residual_system(&p, 100, 1e-3))?;
        let m = a.max_abs.max(b.max_abs);
        ensure(m < 1e-12, || format!("case {}: residual {m:e}", case.label()))?;
        worst = worst.max(m);
    }
    Ok(format!("7 cases, denominators nonvanishing on 4096 points, worst residual {worst:.1e}"))
}

fn reconstruct(case: AuxCase) -> Result<(pexider::families::AuxProfiles, SolutionTuple), String> {
    let p = e2s(AuxSpec::corpus(case).build())?;
    let t = e2s(reconstruct_tuple(&p, &Anchors::default(), 1e-10))?;
    Ok((p, t))
}

fn reconstruction_pipeline() -> Outcome {
    let (_, lin) = reconstruct(AuxCase::Linear)?;
    let r = e2s(residual_main(&lin, 100, 1e-3))?;
    ensure(r.max_abs < 1e-7, || format!("linear residual {:e}", r.max_abs))?;
    // g1' = 2/(ψ2 + ψ1) = 2/(x + 3), so g1 = 2 ln((x + 3)/4.5) + c.
    let oracle = |x: f64| 2.0 * ((x + 3.0) / 4.5).ln();
    let xs = lin.interval().grid(20, 1e-3);
    let c = e2s(lin.g1().eval(xs[10]))? - oracle(xs[10]);
    let mut dev: f64 = 0.0;
    for &x in &xs {
        dev = dev.max((e2s(lin.g1().eval(x))? - oracle(x) - c).abs());
    }
    ensure(dev < 1e-9, || format!("g1 deviates from the closed form by {dev:e}"))?;
    let mut others = Vec::new();
    for case in [AuxCase::Trig, AuxCase::Hyperbolic] {
        let (_, t) = reconstruct(case)?;
        let r = e2s(residual_main(&t, 100, 1e-3))?;
        ensure(r.max_abs < 1e-6, || format!("case {}: residual {:e}", case.label(), r.max_abs))?;
        others.push(format!("{} {:.1e}", case.label(), r.max_abs));
    }
    Ok(format!("linear {:.1e}, g1 oracle {dev:.1e}, {}", r.max_abs, others.join(", ")))
}

fn profile_round_trip() -> Outcome {
    let mut worst: f64 = 0.0;
    for case in AuxCase::ALL {
        let (p, t) = reconstruct(case)?;
        let d = e2s(derived_profiles(&t))?;
        let pairs: [(&str, &Arc<Fn1D>, &Arc<Fn1D>); 5] = [
            ("φ", &d.phi, &p.phi),
            ("ψ1", &d.psi1, &p.psi1),
            ("ψ2", &d.psi2, &p.psi2),
            ("Ψ1", &d.cap_psi1, &p.cap_psi1),
            ("Ψ2", &d.cap_psi2, &p.cap_psi2),
        ];
        for (name, got, want) in pairs {
            for x in p.interval().grid(50, 1e-3) {
                let e = (e2s(got.eval(x))? - e2s(want.eval(x))?).abs();
                ensure(e < 1e-9, || format!("case {}: {name} off by {e:e} at {x}", case.label()))?;
                worst = worst.max(e);
            }
        }
    }
    Ok(format!("7 cases × 5 profiles × 50 points, worst {worst:.1e}"))
}

fn classifier_verdicts() -> Outcome {
    let (tol, n) = (1e-6, 4096);
    let mut r = rng(77);
    for k in 0..10 {
        let t = e2s(build_affine(&random_affine_params(&mut r)))?;
        let rep = e2s(classify_affine_intervals(t.big_f(), tol, n))?;
        ensure(rep.verdict == Verdict::GloballyAffine, || format!("affine instance {k}: {:?}", rep.verdict))?;
    }
    let ex = paper_example();
    let rep = e2s(classify_affine_intervals(ex.big_f(), tol, n))?;
    ensure(rep.verdict == Verdict::PartiallyAffine && rep.intervals.len() == 1, || format!("example: {rep:?}"))?;
    let w = &rep.intervals[0];
    ensure((w.interval.lo() - 1.0).abs() <= 0.02 && (w.interval.hi() - 4.0).abs() <= 0.02, || {
        format!("example window {}", w.interval)
    })?;
    ensure((w.slope - 4.0).abs() <= 1e-6, || format!("example slope {}", w.slope))?;
    for case in [AuxCase::Trig, AuxCase::Linear, AuxCase::Hyperbolic] {
        let (_, t) = reconstruct(case)?;
        let rep = e2s(classify_affine_intervals(t.big_f(), tol, n))?;
        ensure(rep.verdict == Verdict::NowhereAffine, || format!("case {}: {:?}", case.label(), rep.verdict))?;
    }
    Ok(format!("affine global ×10, example window {} slope {}, 1.1/1.2/1.3 nowhere", w.interval, w.slope))
}

fn geometry_lemmas() -> Outcome {
    let mut r = rng(99);
    let mut checks = 0;
    for k in 0..100 {
        let i = random_interval(&mut r);
        let (g1, g2) = random_same_sense_pair(&mut r, i);
        let h = random_subinterval(&mut r, i);
        let cs = e2s(lemma_checks(h, &g1, &g2, i, 1e-9)).map_err(|e| format!("instance {k}: {e}"))?;
        if let Some(c) = cs.iter().find(|c| !c.pass) {
            return Err(format!("instance {k}: {} ({})", c.name, c.detail));
        }
        checks += cs.len();
    }
    Ok(format!("100 instances, {checks} checks"))
}

fn peter_cases() -> Outcome {
    let i = iv(0.0, 2.0);
    let phi = Arc::new(Fn1D::closed_form(iv(0.0, 3.0), Expr::x().sin() + 2.0).unwrap());
    let specs = [
        ("1 (φ ≡ 0)", PeterSpec::Case1Zero {
            i1: i,
            i2: i,
            psi1: Arc::new(Fn1D::identity(i)),
            psi2: Arc::new(Fn1D::affine(i, -2.0, 1.0)),
        }),
        ("1 (ψ ≡ D)", PeterSpec::Case1Constant { i1: i, i2: iv(1.0, 3.0), d: 2.5, phi }),
        ("2", PeterSpec::Case2 {
            i1: i,
            i2: iv(1.0, 3.0),
            a: [0.5, 1.5],
            b: [1.0, 2.5],
            d: 1.0,
            e: -1.0,
            k_values: Some([3.0, 4.0]),
            phi_value: 2.0,
        }),
        ("2 (singleton K)", PeterSpec::Case2 {
            i1: i,
            i2: iv(1.0, 3.0),
            a: [1.0, 2.0],
            b: [1.0, 2.0],
            d: 1.0,
            e: -1.0,
            k_values: None,
            phi_value: 1.0,
        }),
        ("3", PeterSpec::Case3 {
            i1: i,
            i2: i,
            j: 1,
            d: 5.0,
            u: vec![[0.0, 0.5], [0.75, 1.25], [1.5, 2.0]],
            other: Some(7.0),
            phi_value: 1.0,
        }),
    ];
    for (label, spec) in &specs {
        let t = e2s(peter_triple(spec)).map_err(|e| format!("case {label}: {e}"))?;
        let r = e2s(t.residual(200, 1e-3))?;
        ensure(r.max_abs == 0.0, || format!("case {label}: residual {:e}", r.max_abs))?;
    }
    Ok(format!("{} triples, residual exactly 0 on 200²", specs.len()))
}

fn extension_identities() -> Outcome {
    let rep = e2s(extension_invariants(&paper_example(), iv(1.0, 4.0), 100, 1e-3))?;
    let worst = rep.fk_deviation[0].max(rep.fk_deviation[1]).max(rep.g_plus.max_abs);
    ensure(worst < 1e-9, || format!("deviation {worst:e}"))?;
    ensure((rep.a - 4.0).abs() < 1e-12 && (rep.big_b - 3.0).abs() < 1e-12, || {
        format!("constants A = {}, B = {}", rep.a, rep.big_b)
    })?;
    Ok(format!("U* = {}, worst deviation {worst:.1e} on 100²", rep.u_star))
}

fn diagonal_coverage() -> Outcome {
    let mut r = rng(11);
    let (mut worst_t, mut worst_g): (f64, f64) = (0.0, 0.0);
    for k in 0..100 {
        let mut p = random_affine_params(&mut r);
        let i = p.interval;
        let (g1, g2) = random_same_sense_pair(&mut r, i);
        (p.g1, p.g2) = (g1.clone(), g2.clone());
        let s = e2s(pexider::func::diagonal_image(&g1, &g2))?;
        let direct = e2s(sumset_image(&g1, &g2, i, i))?;
        ensure(s.approx_eq(&direct, 1e-12), || format!("pair {k}: diagonal image {s} vs sumset {direct}"))?;
        let t = e2s(build_affine(&p))?;
        let big_g = e2s(solve_for_g(t.big_f(), t.f1(), t.f2(), &g1, &g2, 0.0)).map_err(|e| format!("pair {k}: {e}"))?;
        let (lo, hi) = g1.window();
        for _ in 0..1000 {
            let u = r.gen_range(s.lo()..s.hi());
            if u <= s.lo() {
                continue;
            }
            let root = e2s(diagonal_solve(&g1, &g2, u, 0.0)).map_err(|e| format!("pair {k}, u = {u}: {e}"))?;
            ensure(i.contains(root), || format!("pair {k}: root {root} outside {i}"))?;
            if root > lo && root < hi {
                let e = (g1.eval_raw(root) + g2.eval_raw(root) - u).abs() / (1.0 + u.abs());
                ensure(e < 1e-12, || format!("pair {k}, u = {u}: defect {e:e}"))?;
                worst_t = worst_t.max(e);
                let want = p.b * u + p.beta1 + p.beta2;
                let e = (big_g.eval_raw(u) - want).abs();
                ensure(e < 1e-9, || format!("pair {k}, u = {u}: G off by {e:e}"))?;
                worst_g = worst_g.max(e);
            }
        }
        let d = r.gen_range(0.0..s.len());
        for u in [s.lo(), s.hi(), s.lo() - d - 1e-9, s.hi() + d + 1e-9] {
            match diagonal_solve(&g1, &g2, u, 0.0) {
                Err(Error::Range { .. }) => {}
                other => return Err(format!("pair {k}, u = {u} outside the sumset gave {other:?}")),
            }
        }
    }
    Ok(format!(
        "100 pairs × 1000 interior u, worst defect {worst_t:.1e}, worst G error {worst_g:.1e}; exterior u rejected"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("example fidelity", example_fidelity),
        ("constraint identities", constants_and_perturbations),
        ("affine family", affine_family),
        ("auxiliary profile systems", profile_systems),
        ("profile reconstruction", reconstruction_pipeline),
        ("profile round trip", profile_round_trip),
        ("affinity classifier", classifier_verdicts),
        ("extension lemmas", geometry_lemmas),
        ("auxiliary trichotomy", peter_cases),
        ("extension identities", extension_identities),
        ("diagonal coverage", diagonal_coverage),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
