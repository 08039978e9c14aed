//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.
//!
//! Run with `cargo test -p dowling-kl-cli --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use dowling_kl::algebra::{QPoly, TQPoly};
use dowling_kl::dowling::{
    flat_count, flat_types, standard_generators, whitney, DowlingLattice, GammaElement, LatticeCaps,
};
use dowling_kl::genfun::{series_a, series_ag, series_c, series_s, series_sg};
use dowling_kl::klengine::{dowling_pz, dowling_pz_all, verify_group_independence, verify_theorem1, Which};
use dowling_kl::matroid::{all_matroids, ElemSet, Matroid};
use dowling_kl::qsp::{
    closed_under_duality, connected_sp, count_connected_simple, g_labelings, qsp_all, weighted_counts,
};
use dowling_kl::rootcheck::{
    all_minors_positive_in_u, bezout_symbolic, certify, leading_minors_positive_in_u, sturm_real_rooted,
    CertificateLevel, RatPoly,
};
use dowling_kl::{Exec, GroupSpec};
use num_bigint::BigInt;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(coeffs: &[i64]) -> QPoly {
    QPoly::from_i64s(coeffs)
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dowling-kl"));
    c.env_remove("DOWLING_KL_THREADS");
    c
}

fn scaled_ps(max_n: usize) -> Vec<TQPoly> {
    dowling_pz_all(max_n)
        .unwrap()
        .into_iter()
        .map(|r| r.p.scale_t_by_qsquared().unwrap())
        .collect()
}

fn golden_table() -> Outcome {
    let out = bin()
        .args(["table", "--max-n", "8", "--scaled", "--symbolic"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "exit status {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    ensure!(text == include_str!("../testdata/table_n8.tex"), "table differs from golden:\n{text}");

    // the same rows, entered as integer coefficient lists
    let rows: [&[&[i64]]; 8] = [
        &[&[1]],
        &[&[1]],
        &[&[1], &[1]],
        &[&[1], &[4, 1]],
        &[&[1], &[10, 5, 1], &[15]],
        &[&[1], &[20, 15, 6, 1], &[100, 75]],
        &[&[1], &[35, 35, 21, 7, 1], &[385, 560, 280], &[735]],
        &[&[1], &[56, 70, 56, 28, 8, 1], &[1120, 2380, 2331, 938], &[6720, 9345]],
    ];
    let ps = scaled_ps(8);
    for (idx, row) in rows.iter().enumerate() {
        let want = TQPoly::new(row.iter().map(|c| q(c)).collect());
        ensure!(ps[idx + 1] == want, "n = {}: got {}", idx + 1, ps[idx + 1].to_plain());
    }
    Ok("8 rows exact; n=8 t^3 coefficient 9345q + 6720".into())
}

fn three_engines() -> Outcome {
    let small = [GroupSpec::Cyclic(1), GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)];
    let extra = [GroupSpec::Symmetric(3), GroupSpec::Cyclic(4), GroupSpec::Cyclic(5), GroupSpec::Cyclic(6)];
    let mut lattices = 0;
    for n in 0..=6 {
        lattices += verify_group_independence(n, &small, Exec::default()).map_err(|e| e.to_string())?.len();
        if n <= 3 {
            lattices += verify_group_independence(n, &extra, Exec::default()).map_err(|e| e.to_string())?.len();
        }
        for mode in [Which::P, Which::Z] {
            verify_theorem1(n, mode).map_err(|e| e.to_string())?;
        }
    }
    Ok(format!("{lattices} explicit lattices and weighted counts agree with the symbolic result for n <= 6"))
}

fn generating_functions() -> Outcome {
    const N: usize = 7;
    let c = series_c(N).and_then(|s| s.labeled_counts()).map_err(|e| e.to_string())?;
    let a = series_a(N).and_then(|s| s.labeled_counts()).map_err(|e| e.to_string())?;
    let s = series_s(N).and_then(|s| s.labeled_counts()).map_err(|e| e.to_string())?;
    let mut ag = Vec::new();
    let mut sg = Vec::new();
    for qq in 1..=3 {
        ag.push(series_ag(N, qq).and_then(|s| s.labeled_counts()).map_err(|e| e.to_string())?);
        sg.push(series_sg(N, qq).and_then(|s| s.labeled_counts()).map_err(|e| e.to_string())?);
    }
    let mut compared = 0;
    for n in 0..=N {
        let conn = if n == 0 { Vec::new() } else { connected_sp(n).map_err(|e| e.to_string())? };
        let table = weighted_counts(n).map_err(|e| e.to_string())?;
        for k in 0..=n {
            if n > 0 {
                let count = conn.iter().filter(|m| m.rank() == k).count();
                ensure!(c[n][k] == BigInt::from(count), "C n={n} k={k}");
            }
            ensure!(a[n][k] == table.count_all[k].eval_i64(1), "A n={n} k={k}");
            ensure!(s[n][k] == table.count_simple[k].eval_i64(1), "S n={n} k={k}");
            for qq in 1..=3usize {
                ensure!(ag[qq - 1][n][k] == table.count_all[k].eval_i64(qq as i64), "A_G q={qq} n={n} k={k}");
                ensure!(sg[qq - 1][n][k] == table.count_simple[k].eval_i64(qq as i64), "S_G q={qq} n={n} k={k}");
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} (n, k) cells of C, A, S and A_G, S_G at q = 1, 2, 3 integral and equal"))
}

fn structure_constants() -> Outcome {
    // whitney is indexed by block count; listed here by rank
    let by_rank: Vec<QPoly> = (0..=3).map(|r| whitney(3, 3 - r)).collect();
    ensure!(by_rank == vec![q(&[1]), q(&[3, 3]), q(&[3, 3, 1]), q(&[1])], "whitney(3) by rank = {by_rank:?}");
    for qq in 1..=3usize {
        let group = GroupSpec::Cyclic(qq).build().unwrap();
        for n in 1..=6 {
            let lattice = DowlingLattice::build_with(n, &group, LatticeCaps::default(), Exec::default())
                .map_err(|e| e.to_string())?;
            let atoms = lattice.rank_census()[1];
            ensure!(atoms == n + qq * n * (n - 1) / 2, "atoms n={n} q={qq}: {atoms}");
            if n <= 4 {
                let census = lattice.type_census();
                for ty in flat_types(n) {
                    let want = flat_count(&ty).eval_i64(qq as i64);
                    let got = BigInt::from(census.get(&ty).copied().unwrap_or(0));
                    ensure!(want == got, "type {ty:?} n={n} q={qq}: formula {want}, census {got}");
                }
            }
        }
    }
    Ok("whitney(3) by rank = (1, 3+3q, 3+3q+q^2, 1); atoms for n <= 6; flat types for n <= 4".into())
}

fn double_factorial(k: i64) -> BigInt {
    (1..=k).rev().step_by(2).map(BigInt::from).product()
}

fn counting_formulas() -> Outcome {
    let mut counts = Vec::new();
    for m in 2..=4 {
        let count = count_connected_simple(2 * m - 1, m).map_err(|e| e.to_string())?;
        let formula = double_factorial(2 * m as i64 - 3) * BigInt::from(2 * m - 1).pow(m as u32 - 2);
        ensure!(BigInt::from(count) == formula, "m = {m}: enumerated {count}, formula {formula}");
        counts.push(count);
    }
    ensure!(counts == vec![1, 15, 735], "counts {counts:?}");
    for m in 2..=7 {
        let formula = double_factorial(2 * m as i64 - 3) * BigInt::from(2 * m - 1).pow(m as u32 - 2);
        let lead = dowling_pz(2 * m - 1).map_err(|e| e.to_string())?.p.coeff(m - 1);
        ensure!(lead == QPoly::monomial(formula, 2 * m - 2), "m = {m}: {}", lead.to_plain("q"));
    }
    Ok("counts 1, 15, 735 for m <= 4; leading coefficients for m <= 7".into())
}

fn bezoutian_example() -> Outcome {
    let ps = scaled_ps(6);
    let b = bezout_symbolic(&ps[6], &ps[5]).map_err(|e| e.to_string())?;
    let want = [
        [q(&[10, 10, 5, 1]), q(&[85, 75])],
        [q(&[85, 75]), q(&[700, 1025, 385, 60])],
    ];
    ensure!(b.dim() == 2, "dimension {}", b.dim());
    for i in 0..2 {
        for j in 0..2 {
            ensure!(*b.get(i, j) == want[i][j], "entry ({i},{j}) = {}", b.get(i, j).to_plain("q"));
        }
    }
    let det = b.determinant();
    ensure!(det == q(&[-225, 4500, 11975, 10275, 3550, 685, 60]), "det = {}", det.to_plain("q"));
    let u = det.shift_to_u();
    ensure!(u == q(&[30820, 77260, 71850, 32525, 7875, 1045, 60]), "det in u = {}", u.to_plain("u"));
    Ok("matrix, q-expansion and (q-1)-expansion of the determinant exact".into())
}

fn real_rootedness() -> Outcome {
    let all = dowling_pz_all(15).map_err(|e| e.to_string())?;
    for r in &all[1..] {
        for qq in 1..=5 {
            for (name, poly) in [("P", &r.p), ("Z", &r.z)] {
                let rep = sturm_real_rooted(&RatPoly::from_qpoly(&poly.eval_at_q_i64(qq)));
                ensure!(rep.real_rooted, "{name}{} not real-rooted at q = {qq}", r.n);
            }
        }
    }
    let ps = scaled_ps(15);
    for n in 2..=14 {
        let b = bezout_symbolic(&ps[n + 1], &ps[n]).map_err(|e| e.to_string())?;
        let cert = all_minors_positive_in_u(&b, Exec::default()).map_err(|e| e.to_string())?;
        ensure!(cert.verdict, "B(P{},P{n}): {:?}", n + 1, cert.witness);
    }
    let zs: Vec<TQPoly> = all.into_iter().map(|r| r.z).collect();
    let mut levels = Vec::new();
    for n in 1..=14 {
        let b = bezout_symbolic(&zs[n + 1], &zs[n]).map_err(|e| e.to_string())?;
        let cert = if n <= 9 {
            all_minors_positive_in_u(&b, Exec::default()).map_err(|e| e.to_string())?
        } else {
            leading_minors_positive_in_u(&b)
        };
        ensure!(cert.verdict, "B(Z{},Z{n}): {:?}", n + 1, cert.witness);
        if n >= 10 {
            ensure!(
                certify(&b, Exec::default()).level == CertificateLevel::LeadingPrincipalMinors,
                "B(Z{},Z{n}) expected to fall back to leading minors",
                n + 1
            );
        }
        levels.push(cert.level);
    }
    let full = levels.iter().filter(|l| **l == CertificateLevel::AllMinors).count();
    Ok(format!(
        "Sturm P, Z n <= 15 at q = 1..5; B(P) all minors n <= 14; B(Z) all minors n <= {full}, leading principal minors n = {}..14",
        full + 1
    ))
}

fn negative_control() -> Outcome {
    let rep = sturm_real_rooted(&RatPoly::from_i64s(&[1, 35, 385, 735]));
    ensure!(!rep.real_rooted, "reported real-rooted");
    let out = bin().args(["roots", "--poly", "1,35,385,735"]).output().map_err(|e| e.to_string())?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure!(v["real_rooted"] == serde_json::Value::Bool(false), "cli reported {v}");
    Ok(format!("real_rooted = false ({} distinct real root)", rep.distinct_real_roots))
}

fn labeling_counts() -> Outcome {
    let mut checked = 0;
    for spec in [GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)] {
        let group = spec.build().unwrap();
        for n in 0..=5 {
            for m in qsp_all(n).map_err(|e| e.to_string())? {
                let got = g_labelings(&m, &group).map_err(|e| e.to_string())?.len();
                let want = group.order().pow((n - m.num_components()) as u32);
                ensure!(got == want, "n={n} {spec} bases {:?}: {got} vs {want}", m.bases());
                checked += 1;
            }
        }
    }
    let chorded_cycle = Matroid::graphic(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 1)]);
    let classes = g_labelings(&chorded_cycle, &GroupSpec::Cyclic(2).build().unwrap())
        .map_err(|e| e.to_string())?
        .len();
    ensure!(classes == 16, "chorded 4-cycle over cyclic(2): {classes}");
    Ok(format!("{checked} matroid/group pairs; chorded 4-cycle over cyclic(2) has 16 classes"))
}

fn sorted_bases(ms: &[Matroid]) -> BTreeSet<Vec<ElemSet>> {
    ms.iter().map(|m| m.bases().to_vec()).collect()
}

fn property_suites() -> Outcome {
    for r in dowling_pz_all(20).map_err(|e| e.to_string())? {
        r.check_invariants().map_err(|e| format!("n = {}: {e}", r.n))?;
    }
    for n in 0..=6 {
        let t = weighted_counts(n).map_err(|e| e.to_string())?;
        for k in 0..=n {
            ensure!(t.count_all[k] == t.count_all[n - k], "weighted counts n={n} k={k} not dual-symmetric");
        }
        ensure!(closed_under_duality(&qsp_all(n).map_err(|e| e.to_string())?, n), "duality n={n}");
    }
    for spec in [GroupSpec::Cyclic(2), GroupSpec::Cyclic(3), GroupSpec::Symmetric(3)] {
        let group = spec.build().unwrap();
        let lattice = DowlingLattice::build(3, &group).map_err(|e| e.to_string())?;
        let flats = lattice.flats();
        let mut gens = standard_generators(3, &group);
        gens.push(GammaElement::identity(3, &group));
        for g in &gens {
            let image: Vec<usize> = flats
                .iter()
                .map(|f| lattice.index_of(&g.apply_flat(f, &group)).expect("image is a flat"))
                .collect();
            for a in 0..flats.len() {
                for b in 0..flats.len() {
                    ensure!(
                        lattice.leq(a, b) == lattice.leq(image[a], image[b]),
                        "{spec}: order not preserved"
                    );
                }
            }
        }
        for h in group.elements() {
            let c = GammaElement::central(3, h, &group);
            ensure!(flats.iter().all(|f| c.apply_flat(f, &group) == *f), "{spec}: central element acts");
        }
    }
    for n in 0..=5 {
        let brute: Vec<Matroid> = all_matroids(n).into_iter().filter(|m| !m.has_excluded_minor()).collect();
        let qsp = qsp_all(n).map_err(|e| e.to_string())?;
        ensure!(sorted_bases(&brute) == sorted_bases(&qsp), "n = {n}: enumeration differs from the filter");
    }
    Ok("invariants n <= 20; dual symmetry n <= 6; action at n = 3; enumeration vs filter n <= 5".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("1 golden table", golden_table, Duration::from_secs(5)),
        ("2 three-engine agreement", three_engines, Duration::from_secs(600)),
        ("3 generating functions", generating_functions, Duration::from_secs(300)),
        ("4 structure constants", structure_constants, Duration::from_secs(600)),
        ("5 counting formulas", counting_formulas, Duration::from_secs(600)),
        ("6 Bezoutian example", bezoutian_example, Duration::from_secs(600)),
        ("7 real-rootedness and interlacing", real_rootedness, Duration::from_secs(900)),
        ("8 negative control", negative_control, Duration::from_secs(600)),
        ("9 labeling counts", labeling_counts, Duration::from_secs(600)),
        ("10 property suites", property_suites, Duration::from_secs(600)),
    ];
    let mut failures = Vec::new();
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; over time budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}  [{:.1}s, exact]  {detail}", elapsed.as_secs_f64()),
            Err(why) => {
                println!("FAIL  {name}  [{:.1}s, exact]  {why}", elapsed.as_secs_f64());
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
