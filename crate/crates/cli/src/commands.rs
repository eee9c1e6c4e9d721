use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use qconc::bounds::{bound_for, ghz_noise_exact_report, BoundReport, Theorem};
use qconc::concurrence::{pairwise_table, PairwiseConcurrenceTable};
use qconc::states::DensityMatrix;
use qconc::witness::{
    certified_lower_bound, detection_threshold, k_nonsep_threshold, verdict,
    DetectionTarget, LowerBoundSource, WitnessVerdict,
};

use crate::args::{BoundArgs, FamilyName, SweepArgs, ThresholdArgs, WitnessArgs};
use crate::error::{usage, CliResult};
use crate::format::{float, Table};
use crate::input::{self, ResolvedFamily};

/// A command result in every output format.
#[derive(Debug, Clone)]
pub struct Output {
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    pub json: Value,
    /// Process exit status once the output has been written.
    pub status: i32,
}

impl Output {
    fn new(tables: Vec<Table>, json: Value) -> Self {
        Self {
            tables,
            notes: Vec::new(),
            json,
            status: 0,
        }
    }
}

fn pair_label(i: usize, j: usize) -> String {
    format!("C({i},{j})")
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn theorem_of(source: LowerBoundSource) -> Option<Theorem> {
    match source {
        LowerBoundSource::Theorem1 => Some(Theorem::T1),
        LowerBoundSource::Theorem2 => Some(Theorem::T2),
        LowerBoundSource::Theorem3 => Some(Theorem::T3),
        _ => None,
    }
}

fn reject_pure_exact(sources: &[LowerBoundSource]) -> CliResult<()> {
    if sources.contains(&LowerBoundSource::PureExact) {
        return usage("pure-exact needs a pure state; noisy families are mixed below parameter 1");
    }
    Ok(())
}

fn pairwise_rows(table: &PairwiseConcurrenceTable) -> Table {
    let mut t = Table::new(["pair", "concurrence"]).titled("pairwise concurrence");
    for ((i, j), c) in table.pairs() {
        t.push(vec![pair_label(i, j), float(c)]);
    }
    t
}

fn report_rows(reports: &[BoundReport]) -> Table {
    let opt = |x: Option<f64>| x.map(float).unwrap_or_else(|| "-".into());
    let mut t = Table::new(["theorem", "coefficient", "pair_sum", "bound_on_c2", "bound_on_c"])
        .titled("lower bounds");
    for r in reports {
        t.push(vec![
            r.theorem.label().into(),
            opt(r.coefficient),
            opt(r.pair_sum),
            float(r.bound_on_c2),
            float(r.bound_on_c),
        ]);
    }
    t
}

#[derive(Serialize)]
struct BoundDoc<'a> {
    pairwise: &'a PairwiseConcurrenceTable,
    reports: &'a [BoundReport],
    best: Theorem,
}

pub fn bound(args: &BoundArgs) -> CliResult<Output> {
    let state = input::state(&args.state)?;
    let n = state.rho.n_qubits();
    let table = pairwise_table(&state.rho)?;
    let mut reports = qconc::bounds::applicable_theorems(n)
        .into_iter()
        .map(|t| bound_for(t, &table))
        .collect::<qconc::Result<Vec<_>>>()?;
    if state.family == Some(FamilyName::GhzNoise) {
        let p = args.state.param.expect("family input carries a parameter");
        reports.push(ghz_noise_exact_report(n, p)?);
    }
    let Some(best) = reports
        .iter()
        .fold(None::<&BoundReport>, |acc, r| match acc {
            Some(b) if b.bound_on_c2 >= r.bound_on_c2 => Some(b),
            _ => Some(r),
        })
        .map(|r| r.theorem)
    else {
        return Err(qconc::Error::WrongQubitCount { bound: "T1/T2/T3", n }.into());
    };
    let doc = BoundDoc {
        pairwise: &table,
        reports: &reports,
        best,
    };
    let mut out = Output::new(
        vec![pairwise_rows(&table), report_rows(&reports)],
        serde_json::to_value(&doc).expect("bound document serializes"),
    );
    out.notes.push(format!("best: {}", best.label()));
    Ok(out)
}

fn verdict_rows(verdicts: &[WitnessVerdict]) -> Table {
    let mut t = Table::new(["k", "source", "threshold", "certified_lower_bound_on_c", "detected"]);
    for v in verdicts {
        t.push(vec![
            v.k.to_string(),
            v.source.label().into(),
            float(v.threshold),
            float(v.certified_lower_bound_on_c),
            yes_no(v.detected),
        ]);
    }
    t
}

pub fn witness(args: &WitnessArgs) -> CliResult<Output> {
    let state = input::state(&args.state)?;
    let n = state.rho.n_qubits();
    let ks = input::ks(&args.k, n);
    for &k in &ks {
        k_nonsep_threshold(n, 2, k)?;
    }
    let sources = input::sources(&args.sources, n, state.family)?;
    let mut verdicts = Vec::new();
    for &source in &sources {
        let bound = certified_lower_bound(&state.rho, source)?;
        for &k in &ks {
            verdicts.push(verdict(n, k, bound, source.kind())?);
        }
    }
    verdicts.sort_by_key(|v| v.k);
    let all_detected = ks
        .iter()
        .all(|&k| verdicts.iter().any(|v| v.k == k && v.detected));
    let mut out = Output::new(vec![verdict_rows(&verdicts)], json!({ "verdicts": verdicts }));
    if args.require_detection && !all_detected {
        out.status = 1;
        out.notes.push("not every requested k was detected".into());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Serialize)]
struct CrossingRow {
    source: qconc::witness::SourceKind,
    /// `None` for plain entanglement detection.
    k: Option<usize>,
    crossing: Option<f64>,
}

fn targets(ks: &[usize]) -> Vec<DetectionTarget> {
    std::iter::once(DetectionTarget::Entanglement)
        .chain(ks.iter().map(|&k| DetectionTarget::KNonseparable(k)))
        .collect()
}

fn crossings(
    family: &ResolvedFamily,
    sources: &[LowerBoundSource],
    ks: &[usize],
) -> CliResult<Vec<CrossingRow>> {
    let jobs: Vec<(LowerBoundSource, DetectionTarget)> = sources
        .iter()
        .flat_map(|&s| targets(ks).into_iter().map(move |t| (s, t)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(source, target)| {
            let crossing = detection_threshold(&family.family, target, source)?;
            Ok(CrossingRow {
                source: source.kind(),
                k: match target {
                    DetectionTarget::Entanglement => None,
                    DetectionTarget::KNonseparable(k) => Some(k),
                },
                crossing: crossing.value(),
            })
        })
        .collect::<qconc::Result<Vec<_>>>()?;
    Ok(rows)
}

fn crossing_rows(family: &ResolvedFamily, rows: &[CrossingRow]) -> Table {
    let param = family.parameter_label();
    let mut t = Table::new(["source", "target", param]).titled("detection crossings");
    for r in rows {
        t.push(vec![
            r.source.label().into(),
            r.k.map_or_else(|| "entanglement".into(), |k| format!("k={k}")),
            r.crossing.map_or_else(|| "none".into(), float),
        ]);
    }
    t
}

fn family_json(family: &ResolvedFamily) -> Value {
    json!({
        "family": family.name.to_possible_value().expect("family names are visible").get_name(),
        "n_qubits": family.family.n_qubits(),
        "parameter": family.parameter_label(),
    })
}

pub fn threshold(args: &ThresholdArgs) -> CliResult<Output> {
    if args.family.family.is_some() {
        let family = input::family(&args.family)?.expect("family flag present");
        if args.local_dim != 2 {
            return usage("family crossings are defined for qubits only");
        }
        let n = family.family.n_qubits();
        let ks = if args.k.is_empty() { Vec::new() } else { input::ks(&args.k, n) };
        for &k in &ks {
            k_nonsep_threshold(n, 2, k)?;
        }
        let sources = input::sources(&args.sources, n, Some(family.name))?;
        reject_pure_exact(&sources)?;
        let rows = crossings(&family, &sources, &ks)?;
        let mut doc = family_json(&family);
        doc["crossings"] = serde_json::to_value(&rows).expect("crossings serialize");
        return Ok(Output::new(vec![crossing_rows(&family, &rows)], doc));
    }
    if !args.sources.is_empty() {
        return usage("--source needs --family");
    }
    if args.family.excitations.is_some() {
        return usage("--excitations needs --family");
    }
    let Some(n) = args.family.n else {
        return usage("threshold needs --n, or --family for detection crossings");
    };
    let mut t = Table::new(["k", "threshold"]);
    let mut list = Vec::new();
    for k in input::ks(&args.k, n) {
        let value = k_nonsep_threshold(n, args.local_dim, k)?;
        t.push(vec![k.to_string(), float(value)]);
        list.push(json!({ "k": k, "threshold": value }));
    }
    Ok(Output::new(
        vec![t],
        json!({ "n_parties": n, "local_dim": args.local_dim, "thresholds": list }),
    ))
}

#[derive(Debug, Clone, Serialize)]
struct EntangledFlag {
    source: qconc::witness::SourceKind,
    detected: bool,
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    param: f64,
    pairwise: PairwiseConcurrenceTable,
    bounds: Vec<BoundReport>,
    entangled: Vec<EntangledFlag>,
    verdicts: Vec<WitnessVerdict>,
}

fn report_for(
    source: LowerBoundSource,
    rho: &DensityMatrix,
    table: &PairwiseConcurrenceTable,
    x: f64,
) -> qconc::Result<BoundReport> {
    match theorem_of(source) {
        Some(t) => bound_for(t, table),
        None => {
            // membership check before trusting the family parameter
            certified_lower_bound(rho, source)?;
            ghz_noise_exact_report(rho.n_qubits(), x)
        }
    }
}

fn sweep_row(
    family: &ResolvedFamily,
    sources: &[LowerBoundSource],
    ks: &[usize],
    x: f64,
) -> qconc::Result<SweepRow> {
    let rho = family.family.mixture(x)?;
    let n = rho.n_qubits();
    let table = pairwise_table(&rho)?;
    let bounds = sources
        .iter()
        .map(|&s| report_for(s, &rho, &table, x))
        .collect::<qconc::Result<Vec<_>>>()?;
    let mut entangled = Vec::new();
    let mut verdicts = Vec::new();
    for (&s, r) in sources.iter().zip(&bounds) {
        entangled.push(EntangledFlag {
            source: s.kind(),
            detected: r.bound_on_c > 0.0,
        });
        for &k in ks {
            verdicts.push(verdict(n, k, r.bound_on_c, s.kind())?);
        }
    }
    Ok(SweepRow {
        param: x,
        pairwise: table,
        bounds,
        entangled,
        verdicts,
    })
}

pub fn sweep(args: &SweepArgs) -> CliResult<Output> {
    let Some(family) = input::family(&args.family)? else {
        return usage("sweep needs --family");
    };
    let n = family.family.n_qubits();
    let ks = args.k.clone();
    let mut thresholds = Vec::new();
    for &k in &ks {
        thresholds.push((k, k_nonsep_threshold(n, 2, k)?));
    }
    let sources = input::sources(&args.sources, n, Some(family.name))?;
    reject_pure_exact(&sources)?;

    let points = args.grid.points();
    let rows = points
        .par_iter()
        .map(|&x| sweep_row(&family, &sources, &ks, x))
        .collect::<qconc::Result<Vec<_>>>()?;
    let found = crossings(&family, &sources, &ks)?;

    let mut headers = vec![family.parameter_label().to_string()];
    for i in 1..=n {
        for j in i + 1..=n {
            headers.push(pair_label(i, j));
        }
    }
    for s in &sources {
        headers.push(format!("bound[{}]", s.kind().label()));
    }
    for s in &sources {
        headers.push(format!("entangled[{}]", s.kind().label()));
    }
    for &k in &ks {
        for s in &sources {
            headers.push(format!("k={k}[{}]", s.kind().label()));
        }
    }
    let mut grid = Table::new(headers);
    for row in &rows {
        let mut cells = vec![float(row.param)];
        cells.extend(row.pairwise.pairs().map(|(_, c)| float(c)));
        cells.extend(row.bounds.iter().map(|r| float(r.bound_on_c)));
        cells.extend(row.entangled.iter().map(|e| yes_no(e.detected)));
        // verdicts are stored source-major; columns are k-major
        for ki in 0..ks.len() {
            for si in 0..sources.len() {
                cells.push(yes_no(row.verdicts[si * ks.len() + ki].detected));
            }
        }
        grid.push(cells);
    }

    let mut doc = family_json(&family);
    doc["thresholds"] = json!(thresholds
        .iter()
        .map(|&(k, t)| json!({ "k": k, "threshold": t }))
        .collect::<Vec<_>>());
    doc["rows"] = serde_json::to_value(&rows).expect("sweep rows serialize");
    doc["crossings"] = serde_json::to_value(&found).expect("crossings serialize");
    let mut out = Output::new(vec![grid, crossing_rows(&family, &found)], doc);
    for (k, t) in thresholds {
        out.notes.push(format!("threshold k={k}: {}", float(t)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Cli, Command};
    use clap::Parser;

    fn run(argv: &[&str]) -> CliResult<Output> {
        let cli = Cli::try_parse_from(std::iter::once("qconc").chain(argv.iter().copied())).unwrap();
        match cli.command {
            Command::Bound(a) => bound(&a),
            Command::Witness(a) => witness(&a),
            Command::Sweep(a) => sweep(&a),
            Command::Threshold(a) => threshold(&a),
            Command::Reproduce(_) => unreachable!(),
        }
    }

    #[test]
    fn bound_on_example4_pure_point() {
        let out = run(&["bound", "--family", "ex4", "--param", "1"]).unwrap();
        let r = &out.json["reports"][0];
        assert_eq!(r["theorem"], "T1");
        assert!((r["bound_on_c2"].as_f64().unwrap() - 1.75).abs() < 1e-9);
        assert_eq!(out.json["best"], "T1");
    }

    #[test]
    fn bound_on_ghz_family_adds_exact_report() {
        let out = run(&["bound", "--family", "ghz-noise", "--n", "6", "--param", "0.5"]).unwrap();
        let labels: Vec<&str> = out.json["reports"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["theorem"].as_str().unwrap())
            .collect();
        assert_eq!(labels, ["T2", "T3", "GHZ_EXACT"]);
        assert!(out.json["reports"][2]["pair_sum"].is_null());
        assert_eq!(out.json["best"], "GHZ_EXACT");
    }

    #[test]
    fn bound_needs_four_qubits() {
        let e = run(&["bound", "--family", "w-noise", "--n", "3", "--param", "0.5"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn witness_require_detection() {
        let hit = run(&[
            "witness", "--family", "ex4", "--param", "0.95", "--k", "3", "--require-detection",
        ])
        .unwrap();
        assert_eq!(hit.status, 0);
        let miss = run(&[
            "witness", "--family", "ex4", "--param", "0.92", "--k", "3", "--require-detection",
        ])
        .unwrap();
        assert_eq!(miss.status, 1);
        let v = &miss.json["verdicts"][0];
        assert_eq!(v["source"], "THEOREM1");
        assert_eq!(v["detected"], false);
        assert_eq!(v["n_parties"], 4);
    }

    #[test]
    fn witness_bad_k_is_input_error() {
        let e = run(&["witness", "--family", "ex4", "--param", "0.5", "--k", "5"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn witness_ghz_exact_outside_family() {
        let e = run(&[
            "witness", "--family", "ex4", "--param", "0.5", "--source", "ghz-exact",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("GHZ"));
    }

    #[test]
    fn threshold_formula_and_crossing() {
        let out = run(&["threshold", "--n", "4", "--k", "3"]).unwrap();
        let t = out.json["thresholds"][0]["threshold"].as_f64().unwrap();
        assert!((t - 22f64.sqrt() / 4.0).abs() < 1e-12);

        let out = run(&["threshold", "--family", "ghz-noise", "--k", "3", "--source", "ghz-exact"])
            .unwrap();
        let rows = out.json["crossings"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert!((rows[0]["crossing"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-8);
        assert!((rows[1]["crossing"].as_f64().unwrap() - 0.8991).abs() < 1e-4);
    }

    #[test]
    fn threshold_reports_no_crossing() {
        let out = run(&["threshold", "--family", "ex4", "--k", "2"]).unwrap();
        assert!(out.json["crossings"][1]["crossing"].is_null());
    }

    #[test]
    fn sweep_rows_follow_grid_order() {
        let out = run(&["sweep", "--family", "ex4", "--grid", "0:1:11", "--k", "3"]).unwrap();
        let rows = out.json["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 11);
        for (i, r) in rows.iter().enumerate() {
            assert!((r["param"].as_f64().unwrap() - i as f64 / 10.0).abs() < 1e-12);
        }
        assert_eq!(rows[10]["verdicts"][0]["detected"], true);
        assert_eq!(rows[9]["verdicts"][0]["detected"], false);
        assert_eq!(out.tables[0].rows.len(), 11);
    }

    #[test]
    fn sweep_rejects_pure_exact() {
        let e = run(&["sweep", "--family", "ex4", "--source", "pure-exact"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
