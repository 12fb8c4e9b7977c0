use std::fmt::{self, Write as _};
use std::path::Path;

use clap::Args;
use serde::Serialize;
use subset_syzygy::counterexample::run_counterexample;
use subset_syzygy::liaison::{
    base_locus_gcd, degree_matrix, link_hf, residual_delta, BaseLocus, DegreeMatrix,
};
use subset_syzygy::points::{random_ideal_member, sample_rng, PointSetFile};
use subset_syzygy::poly::{binomial, gcd};
use subset_syzygy::predictor::{compare, guess_ranks, PredictionReport};
use subset_syzygy::search::{
    classify_case, combinations, enumerate_subsets, find_subset, greedy_truncated_subset,
    CaseLabel, SubsetChain, SubsetRecord,
};
use subset_syzygy::{
    betti_window, graded_betti, random_points, BettiTable, Error, FieldSpec, HilbertTable,
    PointSet, PolyVec, DEFAULT_PRIME,
};

use crate::{Command, Format, Output, Source};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Falsified(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Falsified(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "{m}"),
            CliError::Falsified(m) => write!(f, "falsification: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn field_for(prime: Option<u64>) -> CliResult<FieldSpec> {
    Ok(FieldSpec::new(prime.unwrap_or(DEFAULT_PRIME as u64))?)
}

fn load(source: &Source) -> CliResult<PointSet> {
    match (&source.input, &source.random) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            let file: PointSetFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            if let Some(p) = source.prime {
                if p != file.prime {
                    return Err(CliError::Validation(format!(
                        "{} declares prime {} but --prime is {p}",
                        path.display(),
                        file.prime
                    )));
                }
            }
            PointSet::from_file(&file)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
        }
        (None, Some(spec)) => {
            Ok(random_points(spec.n, spec.d, field_for(source.prime)?, spec.seed)?.points)
        }
        _ => Err(CliError::Validation(
            "exactly one of --input or --random is required".into(),
        )),
    }
}

fn emit<T: Serialize>(
    output: &Output,
    value: &T,
    text: impl FnOnce(&T) -> String,
) -> CliResult<()> {
    let body = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable output");
            s.push('\n');
            s
        }
        Format::Text => text(value),
    };
    write_out(output.output.as_deref(), &body)
}

fn write_out(path: Option<&Path>, body: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| CliError::Validation(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Hilbert(source) => hilbert(&source),
        Command::Betti { source, window } => betti(&source, window.map(|w| w.0)),
        Command::Predict {
            source,
            e,
            window,
            subset,
        } => predict(&source, e, window.map(|w| w.0), subset),
        Command::FindSubset { source, m } => subset_chain(&source, m),
        Command::Enumerate { source, m, budget } => enumerate(&source, m, budget),
        Command::Classify(source) => classify(&source),
        Command::Link {
            source,
            ci,
            delta,
            seed,
        } => link(&source, &ci, delta, seed),
        Command::Counterexample {
            seed,
            prime,
            full,
            output,
        } => counterexample(seed, prime, full, &output),
        Command::Experiment(args) => experiment(&args),
    }
}

fn hilbert_text(h: &HilbertTable) -> String {
    format!(
        "degree {}\nt   {}\nh   {}\ndh  {}\n",
        h.degree,
        join(&(0..h.values.len()).collect::<Vec<_>>()),
        join(&h.values),
        join(&h.deltas)
    )
}

fn hilbert(source: &Source) -> CliResult<()> {
    let x = load(source)?;
    emit(&source.output, &x.hilbert(), hilbert_text)
}

fn betti(source: &Source, window: Option<Vec<usize>>) -> CliResult<()> {
    let x = load(source)?;
    if x.is_empty() {
        return Err(CliError::Validation("the point set is empty".into()));
    }
    let table = match window {
        Some(t) => betti_window(&x, &t),
        None => graded_betti(&x),
    };
    emit(&source.output, &table, BettiTable::diagram)
}

fn labels_to_indices(labels: &[usize], d: usize) -> CliResult<Vec<usize>> {
    let mut out = Vec::with_capacity(labels.len());
    for &l in labels {
        if l == 0 || l > d {
            return Err(CliError::Validation(format!(
                "point label {l} is outside 1..={d}"
            )));
        }
        if out.contains(&(l - 1)) {
            return Err(CliError::Validation(format!("point label {l} repeats")));
        }
        out.push(l - 1);
    }
    Ok(out)
}

fn prediction_text(r: &PredictionReport) -> String {
    let mut out = format!(
        "n {}  d {}  e {}  subset {}  ({})\n",
        r.n,
        r.d,
        r.e,
        join(&r.subset_labels),
        r.status
    );
    out += "p  twist  predicted  actual  match  bound\n";
    for e in &r.entries {
        let bound = e.binding.map_or("-".to_string(), |b| format!("{b:?}"));
        let _ = writeln!(
            out,
            "{:<2} {:>5}  {:>9}  {:>6}  {:<5}  {bound}",
            e.p, e.twist, e.predicted, e.actual, e.matches
        );
    }
    let _ = writeln!(
        out,
        "all {}  generators {}  top degree {}",
        r.all_match, r.generators_match, r.top_degree_match
    );
    out
}

fn predict(
    source: &Source,
    e: usize,
    window: Option<Vec<usize>>,
    subset: Option<Vec<usize>>,
) -> CliResult<()> {
    let x = load(source)?;
    let indices = match subset {
        Some(labels) => {
            let idx = labels_to_indices(&labels, x.len())?;
            if idx.len() != e {
                return Err(CliError::Validation(format!(
                    "--subset has {} labels but --e is {e}",
                    idx.len()
                )));
            }
            idx
        }
        None => greedy_truncated_subset(&x, e)?,
    };
    let report = prediction_report(&x, &indices, window.as_deref())?;
    emit(&source.output, &report, prediction_text)
}

fn prediction_report(
    x: &PointSet,
    indices: &[usize],
    window: Option<&[usize]>,
) -> CliResult<PredictionReport> {
    let guess = guess_ranks(x, indices.len(), window)?;
    let y = x.subset(indices);
    let actual = match window {
        Some(t) => betti_window(&y, t),
        None => graded_betti(&y),
    };
    Ok(compare(&guess, &actual, x.len(), indices))
}

fn chain_text(c: &SubsetChain) -> String {
    let mut out = format!("d {}  m {}  explored {}\n", c.d, c.m, c.explored);
    for step in &c.steps {
        let checks: Vec<String> = step
            .checks
            .iter()
            .map(|r| format!("s={}:{}/{}", r.s, r.actual, r.predicted))
            .collect();
        let _ = writeln!(
            out,
            "remove {:>3} -> {:>3} points  {}",
            step.removed + 1,
            step.size,
            checks.join(" ")
        );
    }
    let labels: Vec<usize> = c.subset.iter().map(|i| i + 1).collect();
    let checks: Vec<String> = c
        .final_checks
        .iter()
        .map(|r| format!("s={}:{}/{}", r.s, r.actual, r.predicted))
        .collect();
    let _ = writeln!(
        out,
        "subset {}\nagainst X  {}",
        join(&labels),
        checks.join(" ")
    );
    out
}

fn subset_chain(source: &Source, m: usize) -> CliResult<()> {
    let x = load(source)?;
    match find_subset(&x, m) {
        Ok(chain) => emit(&source.output, &chain, chain_text),
        Err(Error::Falsified(report)) => {
            let body = serde_json::to_string_pretty(&report).expect("serializable report") + "\n";
            write_out(source.output.output.as_deref(), &body)?;
            Err(CliError::Falsified(format!(
                "no removal order reaches {m} points after {} candidates",
                report.explored
            )))
        }
        Err(e) => Err(e.into()),
    }
}

fn enumerate_text(records: &Vec<SubsetRecord>) -> String {
    let mut out = "subset  truncated  mu_ranks  gens_at_l+1  achieves\n".to_string();
    for r in records {
        let labels: Vec<usize> = r.subset.iter().map(|i| i + 1).collect();
        let achieves = r
            .achieves_prediction
            .map_or("-".to_string(), |b| b.to_string());
        let _ = writeln!(
            out,
            "{}  {}  {}  {}  {achieves}",
            labels
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
            r.truncated,
            r.mu_ranks
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(","),
            r.gens_at_lplus1
        );
    }
    out
}

fn enumerate(source: &Source, m: usize, budget: u64) -> CliResult<()> {
    let x = load(source)?;
    let records = enumerate_subsets(&x, m, budget as u128)?;
    emit(&source.output, &records, enumerate_text)
}

#[derive(Serialize)]
struct Classification {
    label: CaseLabel,
    hilbert: HilbertTable,
    betti: BettiTable,
    degree_matrix: DegreeMatrix,
    base_locus: Option<BaseLocus>,
}

fn classify_text(c: &Classification) -> String {
    let mut out = format!(
        "l {}  generators in degree l+1: {}  case {}\n",
        c.label.l, c.label.gens_at_lplus1, c.label.case
    );
    out += &hilbert_text(&c.hilbert);
    out += &c.betti.diagram();
    out += "degree matrix\n";
    out += &c.degree_matrix.to_text();
    match &c.base_locus {
        Some(b) => {
            let _ = writeln!(out, "gcd of I_l has degree {}", b.gcd_degree);
        }
        None => out += "I_l is zero\n",
    }
    out
}

fn classify(source: &Source) -> CliResult<()> {
    let x = load(source)?;
    let label = classify_case(&x)?;
    let betti = graded_betti(&x);
    let hilbert = x.hilbert();
    let base_locus = if hilbert.ideal_dim(2, label.l) > 0 {
        Some(base_locus_gcd(&x, label.l)?)
    } else {
        None
    };
    let c = Classification {
        label,
        degree_matrix: degree_matrix(&betti)?,
        hilbert,
        betti,
        base_locus,
    };
    emit(&source.output, &c, classify_text)
}

#[derive(Serialize)]
struct LinkOutput {
    ci: [usize; 2],
    delta_x: Vec<usize>,
    delta_residual: Vec<usize>,
    residual_degree: usize,
    /// Residual computed from the colon ideal, when a point set was given.
    delta_colon: Option<Vec<usize>>,
    forms: Option<[PolyVec; 2]>,
}

fn link_text(l: &LinkOutput) -> String {
    let mut out = format!(
        "complete intersection ({}, {})\ndh_X  {}\ndh_D  {}\nresidual degree {}\n",
        l.ci[0],
        l.ci[1],
        join(&l.delta_x),
        join(&l.delta_residual),
        l.residual_degree
    );
    if let Some(c) = &l.delta_colon {
        let _ = writeln!(out, "colon {}", join(c));
    }
    out
}

fn link(source: &Source, ci: &[usize], delta: Option<Vec<usize>>, seed: u64) -> CliResult<()> {
    let &[a, b] = ci else {
        return Err(CliError::Validation(format!(
            "--ci needs two degrees, got {}",
            ci.len()
        )));
    };
    let out = match delta {
        Some(dx) => {
            let dd = link_hf(&dx, a, b)?;
            LinkOutput {
                ci: [a, b],
                residual_degree: dd.iter().sum(),
                delta_x: dx,
                delta_residual: dd,
                delta_colon: None,
                forms: None,
            }
        }
        None => {
            let x = load(source)?;
            if x.n() != 2 {
                return Err(Error::NotPlane(x.n()).into());
            }
            let mut rng = sample_rng(seed);
            let missing = |t| CliError::Validation(format!("no form of degree {t} vanishes on X"));
            let h = random_ideal_member(&x, a, &mut rng).ok_or_else(|| missing(a))?;
            let k = random_ideal_member(&x, b, &mut rng).ok_or_else(|| missing(b))?;
            let g = gcd(x.field(), &h, &k);
            if g.degree > 0 {
                return Err(Error::NotRegularSequence(g.degree).into());
            }
            let dx = x.hilbert().deltas;
            let dd = link_hf(&dx, a, b)?;
            let colon = residual_delta(&h, &k, &x)?;
            LinkOutput {
                ci: [a, b],
                residual_degree: dd.iter().sum(),
                delta_x: dx,
                delta_residual: dd,
                delta_colon: Some(colon),
                forms: Some([h, k]),
            }
        }
    };
    emit(&source.output, &out, link_text)
}

fn counterexample(seed: u64, prime: Option<u64>, full: bool, output: &Output) -> CliResult<()> {
    let field = field_for(prime)?;
    if field.prime() < 10_000 {
        eprintln!("warning: primes below 10^4 make generic behavior unlikely");
    }
    let report = run_counterexample(seed, field, full)?;
    emit(output, &report, |r| r.to_text())
}

#[derive(Args)]
pub struct ExperimentArgs {
    /// Projective dimensions, e.g. `2` or `2,3`.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    n: Vec<usize>,
    /// Range of point counts, `lo..hi` inclusive or a single value.
    #[arg(long, default_value = "4..10")]
    d: Span,
    /// Range of subset sizes; all `1 <= e < d` when absent.
    #[arg(long)]
    e: Option<Span>,
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[arg(long)]
    prime: Option<u64>,
    /// Largest number of subsets searched for a matching one off the plane.
    #[arg(long, default_value_t = 200)]
    budget: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span(usize, usize);

impl std::str::FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        match s.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (parse(lo)?, parse(hi.trim_start_matches('='))?);
                if lo > hi {
                    return Err(format!("empty range {s}"));
                }
                Ok(Span(lo, hi))
            }
            None => {
                let v = parse(s)?;
                Ok(Span(v, v))
            }
        }
    }
}

#[derive(Serialize)]
struct Instance {
    n: usize,
    d: usize,
    e: usize,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    subset: Option<Vec<usize>>,
    generators_match: Option<bool>,
    top_degree_match: Option<bool>,
    full_match: Option<bool>,
    mismatched_twists: Vec<usize>,
    /// Whether some `e`-subset has the predicted table; `None` if undecided.
    subset_exists: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize, Default)]
struct Summary {
    instances: usize,
    generators_match: usize,
    top_degree_match: usize,
    full_match: usize,
    subset_exists: usize,
    subset_missing: usize,
    undecided: usize,
}

#[derive(Serialize)]
struct ExperimentReport {
    instances: Vec<Instance>,
    summary: Summary,
}

fn experiment_text(r: &ExperimentReport) -> String {
    let flag = |b: Option<bool>| b.map_or("-", |b| if b { "yes" } else { "no" });
    let mut out = "n   d   e  seed  gens  top  full  exists  note\n".to_string();
    for i in &r.instances {
        let _ = writeln!(
            out,
            "{:<2} {:>3} {:>3} {:>5}  {:<4}  {:<3}  {:<4}  {:<6}  {}",
            i.n,
            i.d,
            i.e,
            i.seed,
            flag(i.generators_match),
            flag(i.top_degree_match),
            flag(i.full_match),
            flag(i.subset_exists),
            i.note.as_deref().unwrap_or("")
        );
    }
    let s = &r.summary;
    let _ = writeln!(
        out,
        "instances {}  generators {}  top degree {}  full {}  subset exists {}  missing {}  undecided {}",
        s.instances, s.generators_match, s.top_degree_match, s.full_match, s.subset_exists, s.subset_missing, s.undecided
    );
    out
}

fn mismatches(report: &PredictionReport) -> Vec<usize> {
    let mut twists: Vec<usize> = report
        .entries
        .iter()
        .filter(|e| !e.matches)
        .map(|e| e.twist)
        .collect();
    twists.dedup();
    twists
}

fn run_instance(x: &PointSet, e: usize, seed: u64, budget: u64) -> CliResult<Instance> {
    let (n, d) = (x.n(), x.len());
    let mut inst = Instance {
        n,
        d,
        e,
        seed,
        subset: None,
        generators_match: None,
        top_degree_match: None,
        full_match: None,
        mismatched_twists: Vec::new(),
        subset_exists: None,
        note: None,
    };
    let indices: Vec<usize> = if n == 2 {
        match find_subset(x, e) {
            Ok(chain) => chain.subset,
            Err(Error::Falsified(_)) => {
                inst.subset_exists = Some(false);
                inst.note = Some("subset search exhausted".into());
                return Ok(inst);
            }
            Err(err) => return Err(err.into()),
        }
    } else {
        (0..e).collect()
    };
    let report = prediction_report(x, &indices, None)?;
    inst.generators_match = Some(report.generators_match);
    inst.top_degree_match = Some(report.top_degree_match);
    inst.full_match = Some(report.all_match);
    inst.mismatched_twists = mismatches(&report);
    inst.subset = Some(indices.iter().map(|i| i + 1).collect());
    if report.all_match {
        inst.subset_exists = Some(true);
        return Ok(inst);
    }
    let candidates = binomial(d, e) as u64;
    if candidates > budget {
        inst.note = Some(format!("budget exceeded: {candidates} subsets > {budget}"));
        return Ok(inst);
    }
    let guess = guess_ranks(x, e, None)?;
    let predicted = guess.derived_betti.entries;
    let exists = combinations(d, e)
        .into_iter()
        .any(|subset| graded_betti(&x.subset(&subset)).entries == predicted);
    inst.subset_exists = Some(exists);
    Ok(inst)
}

fn experiment(args: &ExperimentArgs) -> CliResult<()> {
    let field = field_for(args.prime)?;
    if let Some(Span(lo, hi)) = args.e {
        if hi >= args.d.0 {
            return Err(CliError::Validation(format!(
                "subset size {hi} must be smaller than every point count (smallest d is {})",
                args.d.0
            )));
        }
        if lo == 0 {
            return Err(CliError::Validation(
                "subset size must be at least 1".into(),
            ));
        }
    }
    let mut instances = Vec::new();
    for &n in &args.n {
        for d in args.d.0..=args.d.1 {
            for seed in args.seed_base..args.seed_base + args.seeds {
                let x = random_points(n, d, field, seed)?.points;
                let (lo, hi) = args.e.map_or((1, d - 1), |Span(lo, hi)| (lo, hi));
                for e in lo..=hi {
                    instances.push(run_instance(&x, e, seed, args.budget)?);
                }
            }
        }
    }
    let mut summary = Summary {
        instances: instances.len(),
        ..Summary::default()
    };
    for i in &instances {
        summary.generators_match += usize::from(i.generators_match == Some(true));
        summary.top_degree_match += usize::from(i.top_degree_match == Some(true));
        summary.full_match += usize::from(i.full_match == Some(true));
        match i.subset_exists {
            Some(true) => summary.subset_exists += 1,
            Some(false) => summary.subset_missing += 1,
            None => summary.undecided += 1,
        }
    }
    let report = ExperimentReport { instances, summary };
    emit(&args.output, &report, experiment_text)
}
