use std::fmt;
use std::fs;
use std::io::{self, Write};

use dowling_kl::algebra::TQPoly;
use dowling_kl::dowling::{DowlingError, LatticeCaps};
use dowling_kl::genfun::{self, GenfunError};
use dowling_kl::klengine::{
    dowling_pz, dowling_pz_all, lattice_pz, odd_leading_coefficient, verify_group_independence, verify_theorem1,
    KlError, Which,
};
use dowling_kl::lattice::LatticeError;
use dowling_kl::matroid::Matroid;
use dowling_kl::qsp::{self, QspError};
use dowling_kl::rootcheck::{
    bezout_symbolic, certificate_json, certify, interlacing_report, sturm_real_rooted, CertificateKind,
    CertificateLevel, RatPoly, RootError,
};
use dowling_kl::{Exec, GroupSpec};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::output::{table_csv, table_json, table_latex, PzView};
use crate::{Cli, Command, Format, PzArgs, RootsArgs, Suite, TableArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or a computation cap; exit code 2.
    Usage(String),
    /// A verification or certificate failed; exit code 3.
    Failed(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Failed(s) => f.write_str(s),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<KlError> for CliError {
    fn from(e: KlError) -> Self {
        match e {
            KlError::Dowling(DowlingError::CapExceeded(_))
            | KlError::Lattice(LatticeError::TooLarge(_))
            | KlError::Qsp(QspError::CapExceeded { .. }) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<QspError> for CliError {
    fn from(e: QspError) -> Self {
        KlError::from(e).into()
    }
}

impl From<GenfunError> for CliError {
    fn from(e: GenfunError) -> Self {
        match e {
            GenfunError::OrderTooLarge(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<RootError> for CliError {
    fn from(e: RootError) -> Self {
        CliError::Usage(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Buffered single writer for stdout or `--output`.
struct Sink {
    buf: String,
}

impl Sink {
    fn line(&mut self, s: impl AsRef<str>) {
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    fn raw(&mut self, s: &str) {
        self.buf.push_str(s);
    }

    fn flush(self, cli: &Cli) -> Result<()> {
        match &cli.output {
            Some(path) => fs::write(path, self.buf)?,
            None => io::stdout().lock().write_all(self.buf.as_bytes())?,
        }
        Ok(())
    }
}

fn exec_for(cli: &Cli) -> Result<Exec> {
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        Some(_n) => {
            #[cfg(feature = "parallel")]
            {
                // a second initialization only happens in tests and is harmless
                let _ = rayon::ThreadPoolBuilder::new().num_threads(_n).build_global();
            }
            Ok(Exec::default())
        }
        None => Ok(Exec::default()),
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let exec = exec_for(cli)?;
    let mut sink = Sink { buf: String::new() };
    let outcome = match &cli.command {
        Command::Pz(a) => cmd_pz(a, exec, &mut sink),
        Command::Table(a) => cmd_table(a, &mut sink),
        Command::Verify(a) => cmd_verify(a, exec, &mut sink),
        Command::Roots(a) => cmd_roots(a, exec, &mut sink),
    };
    // partial reports are still written before a failure is returned
    sink.flush(cli)?;
    outcome
}

fn cmd_pz(a: &PzArgs, exec: Exec, sink: &mut Sink) -> Result<()> {
    let result = match a.group {
        Some(spec) => {
            if a.scaled {
                return Err(CliError::Usage("--scaled requires a symbolic result".into()));
            }
            let mut caps = LatticeCaps::default();
            if let Some(m) = a.max_flats {
                if m == 0 {
                    return Err(CliError::Usage("--max-flats must be at least 1".into()));
                }
                caps.max_flats = m;
            }
            lattice_pz(a.n, spec, caps, exec)?
        }
        None => dowling_pz(a.n)?,
    };
    result.check_invariants().map_err(CliError::Failed)?;
    let p = if a.scaled {
        result.p.scale_t_by_qsquared().map_err(|e| CliError::Failed(e.to_string()))?
    } else {
        result.p.clone()
    };
    let view = PzView {
        result: &result,
        p,
        scaled: a.scaled,
    };
    match a.format {
        Format::Json => sink.line(view.json().to_string()),
        Format::Csv => sink.raw(&view.csv()),
        Format::Latex => sink.raw(&view.latex()),
    }
    Ok(())
}

fn cmd_table(a: &TableArgs, sink: &mut Sink) -> Result<()> {
    if a.max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let all = dowling_pz_all(a.max_n)?;
    let rows = all[1..]
        .iter()
        .map(|r| {
            let p = if a.scaled {
                r.p.scale_t_by_qsquared().map_err(|e| CliError::Failed(e.to_string()))?
            } else {
                r.p.clone()
            };
            Ok((r.n, p))
        })
        .collect::<Result<Vec<(usize, TQPoly)>>>()?;
    match a.format {
        Format::Latex => sink.raw(&table_latex(&rows)),
        Format::Csv => sink.raw(&table_csv(&rows)),
        Format::Json => sink.line(table_json(&rows, a.scaled).to_string()),
    }
    Ok(())
}

/// One line of a verification report.
fn check(sink: &mut Sink, suite: &str, name: String, expected: String, got: String) -> Result<()> {
    let ok = expected == got;
    sink.line(json!({"suite": suite, "check": name, "expected": expected, "got": got, "ok": ok}).to_string());
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{suite}: {name}: expected {expected}, got {got}")))
    }
}

fn cmd_verify(a: &VerifyArgs, exec: Exec, sink: &mut Sink) -> Result<()> {
    match a.suite {
        Suite::Theorem1 => {
            let max_n = a.max_n.unwrap_or(6);
            for n in 0..=max_n {
                for mode in [Which::P, Which::Z] {
                    match verify_theorem1(n, mode) {
                        Ok(rep) => {
                            for c in rep.checks {
                                let name = format!("n={n} {mode:?} t^{} vs rank {}", c.i, c.rank);
                                check(sink, "theorem1", name, c.value.clone(), c.value)?;
                            }
                        }
                        Err(KlError::Mismatch { n, i, what, expected, got }) => {
                            return check(sink, "theorem1", format!("n={n} t^{i} {what}"), expected, got);
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
        Suite::Lattice => {
            let max_n = a.max_n.unwrap_or(3);
            let groups = if a.groups.is_empty() {
                vec![
                    GroupSpec::Cyclic(1),
                    GroupSpec::Cyclic(2),
                    GroupSpec::Cyclic(3),
                    GroupSpec::Symmetric(3),
                    GroupSpec::Cyclic(6),
                ]
            } else {
                a.groups.clone()
            };
            for n in 0..=max_n {
                match verify_group_independence(n, &groups, exec) {
                    Ok(checks) => {
                        for c in checks {
                            let name = format!("n={n} {} ({} flats)", c.group, c.flats);
                            check(sink, "lattice", name.clone() + " P", c.p.clone(), c.p)?;
                            check(sink, "lattice", name + " Z", c.z.clone(), c.z)?;
                        }
                    }
                    Err(KlError::Mismatch { n, i, what, expected, got }) => {
                        return check(sink, "lattice", format!("n={n} t^{i} {what}"), expected, got);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Suite::Genfun => verify_genfun(a.max_n.unwrap_or(7), sink)?,
        Suite::Labelings => verify_labelings(a, sink)?,
        Suite::Leading => verify_leading(a.max_m.unwrap_or(4), sink)?,
    }
    Ok(())
}

fn verify_genfun(max_n: usize, sink: &mut Sink) -> Result<()> {
    let c = genfun::series_c(max_n)?.labeled_counts()?;
    for n in 1..=max_n {
        let ms = qsp::connected_sp(n)?;
        for k in 0..=n {
            let count = ms.iter().filter(|m| m.rank() == k).count();
            check(sink, "genfun", format!("C n={n} k={k}"), count.to_string(), c[n][k].to_string())?;
        }
    }
    let tables = (0..=max_n).map(qsp::weighted_counts).collect::<std::result::Result<Vec<_>, _>>()?;
    for q in 1..=3u32 {
        let ag = genfun::series_ag(max_n, q)?.labeled_counts()?;
        let sg = genfun::series_sg(max_n, q)?.labeled_counts()?;
        for (n, t) in tables.iter().enumerate() {
            for k in 0..=n {
                let want_a = t.count_all[k].eval_i64(q as i64).to_string();
                let want_s = t.count_simple[k].eval_i64(q as i64).to_string();
                check(sink, "genfun", format!("A_G q={q} n={n} k={k}"), want_a, ag[n][k].to_string())?;
                check(sink, "genfun", format!("S_G q={q} n={n} k={k}"), want_s, sg[n][k].to_string())?;
            }
        }
    }
    Ok(())
}

/// Graphic matroid of a 4-cycle with one chord.
fn four_cycle_with_chord() -> Matroid {
    Matroid::graphic(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 1)])
}

fn verify_labelings(a: &VerifyArgs, sink: &mut Sink) -> Result<()> {
    let max_n = a.max_n.unwrap_or(4);
    let groups = if a.groups.is_empty() {
        vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)]
    } else {
        a.groups.clone()
    };
    let built = groups
        .iter()
        .map(|s| s.build().map(|g| (*s, g)))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    for n in 0..=max_n {
        for m in qsp::qsp_all(n)? {
            for (spec, g) in &built {
                let got = qsp::g_labelings(&m, g)?.len();
                let want = BigInt::from(g.order()).pow((n - m.num_components()) as u32);
                let name = format!("n={n} bases={:?} {spec}", m.bases());
                check(sink, "labelings", name, want.to_string(), got.to_string())?;
            }
        }
    }
    let g = GroupSpec::Cyclic(2).build().expect("valid");
    let got = qsp::g_labelings(&four_cycle_with_chord(), &g)?.len();
    check(sink, "labelings", "chorded 4-cycle, cyclic:2".into(), "16".into(), got.to_string())
}

fn verify_leading(max_m: usize, sink: &mut Sink) -> Result<()> {
    for m in 2..=max_m {
        let formula = odd_leading_coefficient(m).coeff(2 * m - 2);
        let count = qsp::count_connected_simple(2 * m - 1, m)?;
        check(sink, "leading", format!("m={m} connected simple count"), formula.to_string(), count.to_string())?;
    }
    for m in 2..=max_m.max(7) {
        let pz = dowling_pz(2 * m - 1)?;
        let want = odd_leading_coefficient(m).to_plain("q");
        check(sink, "leading", format!("m={m} leading coefficient of P"), want, pz.p.coeff(m - 1).to_plain("q"))?;
    }
    Ok(())
}

fn parse_pair(s: &str) -> Result<(char, usize, usize)> {
    let bad = || CliError::Usage(format!("cannot parse pair {s:?} (expected e.g. P6,P5)"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let (a, b) = (a.trim(), b.trim());
    let kind = a.chars().next().ok_or_else(bad)?;
    if !matches!(kind, 'P' | 'Z') || !b.starts_with(kind) {
        return Err(bad());
    }
    let n1: usize = a[1..].parse().map_err(|_| bad())?;
    let n2: usize = b[1..].parse().map_err(|_| bad())?;
    Ok((kind, n1, n2))
}

fn cmd_roots(a: &RootsArgs, exec: Exec, sink: &mut Sink) -> Result<()> {
    let mut failed = Vec::new();
    if let Some(poly) = &a.poly {
        let coeffs = poly
            .split(',')
            .map(|x| x.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| CliError::Usage(format!("cannot parse polynomial {poly:?}")))?;
        let p = RatPoly::from_ints(&coeffs);
        if p.is_zero() {
            return Err(CliError::Usage("zero polynomial".into()));
        }
        let rep = sturm_real_rooted(&p);
        let mut v = certificate_json(CertificateKind::Sturm, p.degree().unwrap_or(0), Value::Null, rep.real_rooted, None);
        v["real_rooted"] = json!(rep.real_rooted);
        v["distinct_real_roots"] = json!(rep.distinct_real_roots);
        sink.line(v.to_string());
    }
    if let Some(pair) = &a.pair {
        roots_pair(pair, a, exec, sink, &mut failed)?;
    }
    if let Some(max_n) = a.max_n {
        let (sturm, interlace, tp) = if a.sturm || a.interlace || a.tp {
            (a.sturm, a.interlace, a.tp)
        } else {
            (true, true, false)
        };
        roots_sweep(max_n, a, (sturm, interlace, tp), exec, sink, &mut failed)?;
    }
    if a.poly.is_none() && a.pair.is_none() && a.max_n.is_none() {
        return Err(CliError::Usage("nothing to do: give --poly, --pair or --max-n".into()));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("failed certificates: {}", failed.join("; "))))
    }
}

fn polys(kind: char, max_n: usize) -> Result<Vec<TQPoly>> {
    let all = dowling_pz_all(max_n)?;
    all.into_iter()
        .map(|r| match kind {
            'P' => r.p.scale_t_by_qsquared().map_err(|e| CliError::Failed(e.to_string())),
            _ => Ok(r.z),
        })
        .collect()
}

fn roots_pair(pair: &str, a: &RootsArgs, exec: Exec, sink: &mut Sink, failed: &mut Vec<String>) -> Result<()> {
    let (kind, n1, n2) = parse_pair(pair)?;
    let ps = polys(kind, n1.max(n2))?;
    let b = bezout_symbolic(&ps[n1], &ps[n2])?;
    if a.symbolic {
        let rows: Vec<Vec<String>> = b.rows().iter().map(|r| r.iter().map(|e| e.to_plain("q")).collect()).collect();
        let det = b.determinant();
        sink.line(
            json!({
                "pair": pair,
                "matrix": rows,
                "det_q": det.to_plain("q"),
                "det_u": det.shift_to_u().to_plain("u"),
            })
            .to_string(),
        );
        let cert = certify(&b, exec);
        if !cert.verdict {
            failed.push(format!("total positivity of B({pair})"));
        }
        let mut v = certificate_json(CertificateKind::TotalPositivity, n1, json!("symbolic"), cert.verdict, cert.witness.as_ref());
        v["level"] = json!(cert.level);
        v["strict"] = json!(cert.strict);
        v["minors_checked"] = json!(cert.minors_checked);
        sink.line(v.to_string());
    } else {
        for &q in &a.q {
            let rep = interlacing_report(&ps[n1].eval_at_q_i64(q), &ps[n2].eval_at_q_i64(q))?;
            if !rep.bezout_positive_definite {
                failed.push(format!("B({pair}) at q={q}"));
            }
            sink.line(certificate_json(CertificateKind::PositiveDefinite, n1, json!(q), rep.bezout_positive_definite, None).to_string());
        }
    }
    Ok(())
}

fn roots_sweep(
    max_n: usize,
    a: &RootsArgs,
    (sturm, interlace, tp): (bool, bool, bool),
    exec: Exec,
    sink: &mut Sink,
    failed: &mut Vec<String>,
) -> Result<()> {
    let ps = polys('P', max_n)?;
    let zs = polys('Z', max_n)?;
    for (kind, list) in [("P", &ps), ("Z", &zs)] {
        if sturm {
            for n in 1..=max_n {
                for &q in &a.q {
                    let rep = sturm_real_rooted(&RatPoly::from_qpoly(&list[n].eval_at_q_i64(q)));
                    if !rep.real_rooted {
                        failed.push(format!("{kind}{n} at q={q} not real-rooted"));
                    }
                    let mut v = certificate_json(CertificateKind::Sturm, n, json!(q), rep.real_rooted, None);
                    v["poly"] = json!(kind);
                    v["real_rooted"] = json!(rep.real_rooted);
                    sink.line(v.to_string());
                }
            }
        }
        // B(P_3, P_2) is the first non-vacuous KL pair; Z pairs start at n = 1
        let first = if kind == "P" { 2 } else { 1 };
        for n in first..max_n {
            let (f, g) = (&list[n + 1], &list[n]);
            if interlace {
                for &q in &a.q {
                    let pd = dowling_kl::rootcheck::interlaces(&f.eval_at_q_i64(q), &g.eval_at_q_i64(q))?;
                    if !pd {
                        failed.push(format!("B({kind}{},{kind}{n}) at q={q}", n + 1));
                    }
                    let mut v = certificate_json(CertificateKind::PositiveDefinite, n, json!(q), pd, None);
                    v["pair"] = json!(format!("{kind}{},{kind}{n}", n + 1));
                    sink.line(v.to_string());
                }
            }
            if tp {
                let b = bezout_symbolic(f, g)?;
                let cert = certify(&b, exec);
                if !cert.verdict {
                    failed.push(format!("total positivity of B({kind}{},{kind}{n})", n + 1));
                }
                let mut v = certificate_json(CertificateKind::TotalPositivity, n, json!("symbolic"), cert.verdict, cert.witness.as_ref());
                v["pair"] = json!(format!("{kind}{},{kind}{n}", n + 1));
                v["level"] = json!(cert.level);
                v["strict"] = json!(cert.strict && cert.level == CertificateLevel::AllMinors);
                sink.line(v.to_string());
            }
        }
    }
    Ok(())
}
