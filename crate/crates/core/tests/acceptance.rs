//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use hjc_core::algebra::{associator, find_nonassociative_triple, AlgebraElement, AlgebraTag};
use hjc_core::berry::{self, BasePoint, ChartTag, Matrix2K, PointClass};
use hjc_core::block::BlockOperator;
use hjc_core::cli::{expected_spectrum, random_point, time_grid};
use hjc_core::fock::{
    annihilation, creation, machine_exact_tol, normalized_annihilation, normalized_creation, restrict,
    shift_identity_check, FockOperator, SafeSubspace,
};
use hjc_core::grassmann;
use hjc_core::jc::{self, JCParams, NormalizerSide, SiteColor};
use hjc_core::oracle;
use hjc_core::HjcError;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(name: &str, value: f64, tol: f64) -> Result<(), String> {
    ensure(value <= tol, || format!("{name} = {value:e} exceeds {tol:e}"))
}

fn fail<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn random_element(rng: &mut ChaCha8Rng, tag: AlgebraTag) -> AlgebraElement {
    let coeffs = (0..tag.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
    AlgebraElement::new(tag, coeffs).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng, tag: AlgebraTag) -> AlgebraElement {
    loop {
        let u = random_element(rng, tag);
        let n = u.norm();
        if n > 0.1 {
            return u.scale(1.0 / n);
        }
    }
}

fn algebra_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut norm_err, mut conj_err, mut alt_err) = (0.0f64, 0.0f64, 0.0f64);
    for tag in AlgebraTag::ALL {
        for _ in 0..1000 {
            let a = random_element(&mut rng, tag);
            let b = random_element(&mut rng, tag);
            let ab = a.mul(&b).map_err(fail)?;
            let scale = a.norm() * b.norm();
            norm_err = norm_err.max((ab.norm() - scale).abs() / scale);
            let rhs = b.conj().mul(&a.conj()).map_err(fail)?;
            conj_err = conj_err.max(ab.conj().sub(&rhs).map_err(fail)?.max_abs());
            let left = associator(&a, &a, &b).map_err(fail)?.max_abs();
            let right = associator(&a, &b, &b).map_err(fail)?.max_abs();
            alt_err = alt_err.max(left).max(right);
        }
    }
    within("norm multiplicativity", norm_err, 1e-12)?;
    within("conjugation anti-homomorphism", conj_err, 1e-13)?;
    within("alternativity", alt_err, 1e-12)?;
    let triple = find_nonassociative_triple(AlgebraTag::O).ok_or("no octonion triple found")?;
    let e = |k| AlgebraElement::basis(AlgebraTag::O, k);
    let assoc = associator(&e(triple.0), &e(triple.1), &e(triple.2)).map_err(fail)?;
    ensure(!assoc.is_zero(), || format!("triple {triple:?} associates"))?;
    for tag in [AlgebraTag::R, AlgebraTag::C, AlgebraTag::H] {
        ensure(find_nonassociative_triple(tag).is_none(), || {
            format!("{tag} is associative")
        })?;
    }
    Ok(format!(
        "norm {norm_err:.1e}, conj {conj_err:.1e}, alt {alt_err:.1e}, octonion triple e{}e{}e{}",
        triple.0, triple.1, triple.2
    ))
}

fn classical_charts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for tag in AlgebraTag::ALL {
        let mut taken = 0;
        while taken < 100 {
            let p = random_point(&mut rng, tag);
            if berry::classify_point(&p) != PointClass::Regular {
                continue;
            }
            let h = berry::build_hamiltonian(&p);
            let proj = berry::projector(&p).map_err(fail)?;
            for chart in ChartTag::BOTH {
                let dec = berry::chart_decompose(&p, chart).map_err(fail)?;
                worst = worst.max(berry::reconstruction_residual(&h, &dec).map_err(fail)?);
                worst = worst.max(dec.unitary.unitarity_residual().map_err(fail)?);
                let via = dec
                    .unitary
                    .mul(&Matrix2K::basic_projector(tag))
                    .and_then(|m| m.mul(&dec.unitary.adjoint()))
                    .map_err(fail)?;
                worst = worst.max(via.distance(&proj).map_err(fail)?);
            }
            let u1 = berry::chart_unitary(&p, ChartTag::I).map_err(fail)?;
            let u2 = berry::chart_unitary(&p, ChartTag::II).map_err(fail)?;
            let phi = berry::transition_function(&p).map_err(fail)?;
            worst = worst.max(u2.distance(&u1.mul(&phi).map_err(fail)?).map_err(fail)?);
            worst = worst.max(proj.mul(&proj).and_then(|m| m.distance(&proj)).map_err(fail)?);
            worst = worst.max(proj.hermiticity_residual().map_err(fail)?);
            taken += 1;
        }
    }
    within("chart residual", worst, 1e-12)?;
    for tag in AlgebraTag::ALL {
        let south = BasePoint::new(AlgebraElement::zero(tag), -1.0).map_err(fail)?;
        let north = BasePoint::new(AlgebraElement::zero(tag), 1.0).map_err(fail)?;
        ensure(
            matches!(
                berry::chart_decompose(&south, ChartTag::I),
                Err(HjcError::DiracString { chart: ChartTag::I, .. })
            ),
            || format!("chart I at (0,0,−1) over {tag} did not raise"),
        )?;
        ensure(
            matches!(
                berry::chart_decompose(&north, ChartTag::II),
                Err(HjcError::DiracString {
                    chart: ChartTag::II,
                    ..
                })
            ),
            || format!("chart II at (0,0,+1) over {tag} did not raise"),
        )?;
    }
    Ok(format!(
        "worst residual {worst:.1e} over 400 points; both strings raise"
    ))
}

fn string_divergence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut min_ratio = f64::INFINITY;
    for tag in AlgebraTag::ALL {
        let u = random_unit(&mut rng, tag);
        let mut prev: Option<f64> = None;
        for eps in [1e-2, 1e-3, 1e-4] {
            let p = BasePoint::new(u.scale(eps), -1.0).map_err(fail)?;
            let growth = berry::conditioning(&p, ChartTag::I);
            if let Some(prev) = prev {
                min_ratio = min_ratio.min(growth / prev);
            }
            prev = Some(growth);
            let proj = berry::projector(&p).map_err(fail)?;
            ensure(proj.max_norm() <= 1.0 + 1e-12, || {
                format!("projector entry {} > 1", proj.max_norm())
            })?;
        }
    }
    ensure(min_ratio >= 10.0, || {
        format!("chart-I growth ratio {min_ratio} < 10 per decade")
    })?;
    Ok(format!(
        "minimum growth {min_ratio:.4}× per decade; projector bounded by 1"
    ))
}

fn fock_suite() -> Outcome {
    for d in [8usize, 32] {
        let exact = machine_exact_tol(d);
        let a = annihilation(d).map_err(fail)?;
        let ad = creation(d).map_err(fail)?;
        let ccr = a.commutator(&ad).map_err(fail)?;
        let mut expected = vec![1.0; d];
        expected[d - 1] = -((d - 1) as f64);
        let ccr_err = ccr
            .sub(&FockOperator::from_diagonal(&expected))
            .map_err(fail)?
            .max_abs();
        within(&format!("CCR d={d}"), ccr_err, exact)?;

        let e = normalized_annihilation(d).map_err(fail)?;
        let ed = normalized_creation(d).map_err(fail)?;
        let mut upper = vec![1.0; d];
        upper[d - 1] = 0.0;
        let mut lower = vec![1.0; d];
        lower[0] = 0.0;
        ensure(e.mul(&ed).map_err(fail)? == FockOperator::from_diagonal(&upper), || {
            format!("E E† d={d}")
        })?;
        ensure(ed.mul(&e).map_err(fail)? == FockOperator::from_diagonal(&lower), || {
            format!("E† E d={d}")
        })?;
        ensure(ed == e.adjoint(), || format!("E† is not the adjoint of E at d={d}"))?;

        for (name, f) in [
            ("sqrt", (|n: f64| n.sqrt()) as fn(f64) -> f64),
            ("R", |n: f64| (n + 0.09).sqrt()),
            ("exp", |n: f64| (-0.1 * n).exp()),
        ] {
            within(
                &format!("shift identity {name} d={d}"),
                shift_identity_check(f, d).map_err(fail)?,
                1e-13,
            )?;
        }
        let safe = SafeSubspace::new(d, 1).map_err(fail)?;
        let ccr_safe = restrict(&ccr, safe).map_err(fail)?;
        within(
            "CCR on safe subspace",
            ccr_safe.sub(&FockOperator::identity(d - 1)).map_err(fail)?.max_abs(),
            exact,
        )?;
    }
    Ok("d ∈ {8, 32}: CCR, partial isometries and shift identities hold".into())
}

fn quantum_decomposition() -> Outcome {
    let mut worst_rec = 0.0f64;
    let mut worst_uni = 0.0f64;
    for theta in [-1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0] {
        let p = JCParams::new(theta, 32).map_err(fail)?;
        let h = jc::build_h_jc(&p).map_err(fail)?;
        let (good, bad) = if theta > 0.0 {
            (ChartTag::I, ChartTag::II)
        } else {
            (ChartTag::II, ChartTag::I)
        };
        let dec = jc::final_decompose(&p, good).map_err(fail)?;
        worst_rec = worst_rec.max(jc::reconstruction_residual(&h, &dec, 2).map_err(fail)?);
        worst_uni = worst_uni.max(dec.unitary.unitarity_residual(1).map_err(fail)?);
        match jc::final_decompose(&p, bad) {
            Err(HjcError::SingularSector { chart, report, .. }) => {
                ensure(chart == bad, || format!("θ={theta}: error names chart {chart}"))?;
                let levels = report.singular_levels();
                ensure(levels == [0], || format!("θ={theta}: singular levels {levels:?}"))?;
                ensure(report.singular_pairs() == [(bad, 0)], || {
                    format!("θ={theta}: {:?}", report.singular_pairs())
                })?;
                for site in report.lattice(6) {
                    let on_axis = site.level_pair.contains(&0);
                    ensure((site.color == SiteColor::Black) == on_axis, || {
                        format!("θ={theta}: lattice site {:?} is {:?}", site.level_pair, site.color)
                    })?;
                }
            }
            other => return Err(format!("θ={theta}: chart {bad} gave {:?}", other.map(|_| ()))),
        }
    }
    within("reconstruction", worst_rec, 1e-10)?;
    within("unitarity", worst_uni, 1e-12)?;
    Ok(format!(
        "reconstruction {worst_rec:.1e}, unitarity {worst_uni:.1e}; strings only at level 0"
    ))
}

fn spectral_law() -> Outcome {
    let p = JCParams::new(0.3, 16).map_err(fail)?;
    let h = jc::build_h_jc(&p).map_err(fail)?;
    let eig = oracle::eig_hermitian(&h.flatten()).map_err(fail)?;
    let expected = expected_spectrum(&p);
    ensure(eig.values.len() == expected.len(), || "spectrum size".into())?;
    let dev = eig
        .values
        .iter()
        .zip(&expected)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    within("eigenvalue deviation", dev, 1e-10)?;
    Ok(format!("32 eigenvalues within {dev:.1e} of ±√(n+θ²), −θ, +θ"))
}

fn projector_suite() -> Outcome {
    let mut worst_alg = 0.0f64;
    let mut worst_rec = 0.0f64;
    for theta in [-1.0, -0.5, 0.1, 0.3, 1.0, 2.0] {
        let p = JCParams::new(theta, 24).map_err(fail)?;
        let proj = jc::projector_jc(&p).map_err(fail)?.operator;
        worst_alg = worst_alg.max(proj.idempotency_residual(1).map_err(fail)?);
        worst_alg = worst_alg.max(proj.hermiticity_residual());
        let right = jc::projector_jc_with(&p, NormalizerSide::Right).map_err(fail)?.operator;
        worst_alg = worst_alg.max(proj.distance_on(&right, 1).map_err(fail)?);
        let lambda = jc::spectral_weights(&p).map_err(fail)?;
        worst_alg = worst_alg.max(lambda.commutator(&proj).map_err(fail)?.max_abs());
        let (plus, minus) = jc::spectral_decompose(&p).map_err(fail)?;
        let h = jc::build_h_jc(&p).map_err(fail)?;
        worst_rec = worst_rec.max(plus.add(&minus).map_err(fail)?.distance_on(&h, 2).map_err(fail)?);
    }
    // Both chart forms against the closed form.
    let p = JCParams::new(1.0, 24).map_err(fail)?;
    let closed = jc::projector_jc(&p).map_err(fail)?.operator;
    let via_i = jc::projector_from_chart(&p, ChartTag::I).map_err(fail)?;
    let via_ii = jc::projector_from_chart(&p, ChartTag::II).map_err(fail)?;
    let forms = via_i
        .distance_on(&closed, 1)
        .map_err(fail)?
        .max(via_ii.distance_on(&closed, 1).map_err(fail)?)
        .max(via_i.distance_on(&via_ii, 1).map_err(fail)?);
    within("projector algebra", worst_alg, 1e-12)?;
    within("chart forms", forms, 1e-12)?;
    within("spectral reconstruction", worst_rec, 1e-10)?;
    Ok(format!(
        "algebra {worst_alg:.1e}, chart forms {forms:.1e}, spectral {worst_rec:.1e}"
    ))
}

fn propagator_suite() -> Outcome {
    let p = JCParams::new(0.25, 40).map_err(fail)?;
    let h = jc::build_h_jc(&p).map_err(fail)?.scale(p.g);
    let eig = oracle::eig_hermitian(&h.flatten()).map_err(fail)?;
    let times = time_grid(10.0, 50);
    let (mut closed_err, mut uni_err) = (0.0f64, 0.0f64);
    for &t in &times {
        let closed = jc::propagator_closed_form(&p, t).map_err(fail)?;
        let exact = BlockOperator::from_flat(&oracle::expm_from_eigen(&eig, t)).map_err(fail)?;
        closed_err = closed_err.max(closed.distance_on(&exact, 2).map_err(fail)?);
        uni_err = uni_err.max(closed.unitarity_residual(1).map_err(fail)?);
    }
    within("closed form vs oracle", closed_err, 1e-8)?;
    within("unitarity", uni_err, 1e-10)?;

    // Full model with θ = (Δ − ω)/2g = 0.25.
    let full = JCParams::physical(1.0, 1.5, 1.0, 40).map_err(fail)?;
    let (h1, h2) = jc::build_full_hamiltonian(&full).map_err(fail)?;
    let comm = h1.commutator(&h2).map_err(fail)?.max_abs();
    within("[H1, H2]", comm, 1e-13)?;
    let h_full = jc::build_jc_hamiltonian(&full).map_err(fail)?;
    let e_full = oracle::eig_hermitian(&h_full.flatten()).map_err(fail)?;
    let e1 = oracle::eig_hermitian(&h1.flatten()).map_err(fail)?;
    let e2 = oracle::eig_hermitian(&h2.flatten()).map_err(fail)?;
    let mut split_err = 0.0f64;
    for &t in &times {
        let exact = BlockOperator::from_flat(&oracle::expm_from_eigen(&e_full, t)).map_err(fail)?;
        let product = BlockOperator::from_flat(&(oracle::expm_from_eigen(&e1, t) * oracle::expm_from_eigen(&e2, t)))
            .map_err(fail)?;
        let closed = jc::propagator_full(&full, t).map_err(fail)?;
        split_err = split_err
            .max(product.distance_on(&exact, 2).map_err(fail)?)
            .max(closed.distance_on(&exact, 2).map_err(fail)?);
    }
    within("product law", split_err, 1e-8)?;
    Ok(format!(
        "closed {closed_err:.1e}, unitarity {uni_err:.1e}, [H1,H2] {comm:.1e}, product law {split_err:.1e}"
    ))
}

fn grassmann_suite() -> Outcome {
    let (mut forms, mut roundtrip) = (0.0f64, 0.0f64);
    for theta in [0.25, 0.5, 1.0, 2.0] {
        let p = JCParams::new(theta, 24).map_err(fail)?;
        let left = grassmann::coordinate_left_form(&p).map_err(fail)?;
        let right = grassmann::coordinate_right_form(&p).map_err(fail)?;
        forms = forms.max(left.sub(&right).map_err(fail)?.max_abs());
        let z = grassmann::local_coordinate(&p).map_err(fail)?;
        let oike = grassmann::oike_projector(&z).map_err(fail)?;
        let direct = jc::projector_jc(&p).map_err(fail)?.operator;
        roundtrip = roundtrip.max(oike.distance_on(&direct, 1).map_err(fail)?);
    }
    within("coordinate forms", forms, 1e-13)?;
    within("Oike round trip", roundtrip, 1e-10)?;
    let neg = JCParams::new(-0.5, 24).map_err(fail)?;
    match grassmann::local_coordinate(&neg) {
        Err(HjcError::SingularSector { report, .. }) => ensure(report.singular_levels() == [0], || {
            format!("levels {:?}", report.singular_levels())
        })?,
        other => return Err(format!("θ = −0.5 gave {:?}", other.map(|_| ()))),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut classical = 0.0f64;
    let mut taken = 0;
    while taken < 100 {
        let (x, y, z): (f64, f64, f64) = (
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        );
        let p = BasePoint::complex(x, y, z).map_err(fail)?;
        if p.r_plus_z() <= 0.1 {
            continue;
        }
        let zc = grassmann::classical_coordinate(x, y, z).map_err(fail)?;
        let expected = Complex64::new(x, y) / (p.r() + z);
        ensure((zc - expected).norm() <= 1e-12 * (1.0 + expected.norm()), || {
            format!("Z_c at ({x},{y},{z})")
        })?;
        let direct = berry::projector(&p).map_err(fail)?;
        classical = classical.max(grassmann::scalar_oike_projector(zc).distance(&direct).map_err(fail)?);
        taken += 1;
    }
    within("classical round trip", classical, 1e-12)?;
    Ok(format!(
        "forms {forms:.1e}, round trip {roundtrip:.1e}, classical {classical:.1e}; θ=−0.5 singular at level 0"
    ))
}

fn run_cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hjc"))
        .args(args)
        .env_remove("HJC_SEED")
        .output()
        .map_err(fail)?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn cli_suite() -> Outcome {
    for cmd in ["berry", "jc", "strings", "evolve", "grassmann"] {
        let args = [cmd, "--seed", "1234"];
        let (code_a, a) = run_cli(&args)?;
        let (code_b, b) = run_cli(&args)?;
        ensure(code_a == 0 && code_b == 0, || format!("{cmd} exited {code_a}/{code_b}"))?;
        ensure(a == b, || format!("{cmd} output differs between runs"))?;
        let v: serde_json::Value = serde_json::from_slice(&a).map_err(|e| format!("{cmd}: {e}"))?;
        ensure(v["schema"] == 1, || format!("{cmd}: schema"))?;
        ensure(v["command"] == cmd, || format!("{cmd}: command field"))?;
        ensure(v["seed"] == 1234, || format!("{cmd}: seed field"))?;
        ensure(v["pass"] == true, || format!("{cmd}: pass field"))?;
        ensure(v["tolerances"].is_object(), || format!("{cmd}: tolerances"))?;
        let records = v["records"].as_array().ok_or(format!("{cmd}: records"))?;
        ensure(!records.is_empty(), || format!("{cmd}: no records"))?;
    }
    let (code, csv) = run_cli(&["evolve", "--format", "csv", "--seed", "1234"])?;
    let csv = String::from_utf8(csv).map_err(fail)?;
    let mut lines = csv.lines();
    ensure(code == 0, || format!("evolve csv exited {code}"))?;
    ensure(
        lines
            .next()
            .is_some_and(|l| l.starts_with("# schema=1 command=evolve seed=1234")),
        || "csv preamble".into(),
    )?;
    ensure(lines.next() == Some("t,closed_vs_oracle_residual,inversion"), || {
        "csv header".into()
    })?;
    ensure(lines.count() == 50, || "csv rows".into())?;
    let (code, _) = run_cli(&["berry", "--grid", "w=0:1:0,z=0:1:3"])?;
    ensure(code == 2, || format!("empty grid exited {code}"))?;
    Ok("all five commands exit 0, deterministic, schema 1".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("composition algebras", algebra_suite),
        ("classical charts", classical_charts),
        ("string divergence", string_divergence),
        ("Fock operators", fock_suite),
        ("quantum decomposition", quantum_decomposition),
        ("spectral law", spectral_law),
        ("projector and spectral decomposition", projector_suite),
        ("propagator", propagator_suite),
        ("Grassmann round trip", grassmann_suite),
        ("CLI", cli_suite),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
