//! Command implementations. Each returns the text to print.

use std::fmt;
use std::str::FromStr;

use fvr_core::oracles::{
    enumerate_instances, enumerate_ranked_profiles, jr_by_subsets, strong_pvc,
    strong_pvc_by_subsets, GeneratorSpec, DEFAULT_SEED,
};
use fvr_core::{
    all_committees, closed_form_fvr, committee_score, empirical_fvr_committee, empirical_fvr_point,
    expanded_rule, flexibility_grid, jr_check, multiwinner_bound, ropt_winner, score_all,
    sequential_rule, Frac, FvrError, Instance, MultiParams, WeightFn,
};
use rayon::prelude::*;

use crate::format::{parse_instance, parse_ranked, serialize_instance};

/// Significant digits of every decimal rendering.
pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input, unknown names or limits exceeded; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A verification suite found violations; exit code 1. Carries the
    /// report.
    #[error("{0}")]
    Violations(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Violations(_) => 1,
        }
    }
}

impl From<FvrError> for CliError {
    fn from(e: FvrError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// A rule name as accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Single(WeightFn),
    Sequential,
    Expanded,
}

pub const RULE_SYNTAX: &str = "approval, threshold:<s0>, power:<p>, opt, seq, expanded";

impl FromStr for Rule {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Rule> {
        let bad = || CliError::Usage(format!("unknown rule {s:?}; valid rules: {RULE_SYNTAX}"));
        Ok(match s.split_once(':') {
            None => match s {
                "approval" => Rule::Single(WeightFn::Constant),
                "opt" => Rule::Single(WeightFn::ropt()),
                "seq" => Rule::Sequential,
                "expanded" => Rule::Expanded,
                _ => return Err(bad()),
            },
            Some(("threshold", v)) => {
                let s0: Frac = v.parse().map_err(|_| bad())?;
                Rule::Single(WeightFn::threshold(s0)?)
            }
            Some(("power", v)) => Rule::Single(WeightFn::Power(v.parse().map_err(|_| bad())?)),
            Some(_) => return Err(bad()),
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Single(w) => write!(f, "{w}"),
            Rule::Sequential => write!(f, "seq"),
            Rule::Expanded => write!(f, "expanded"),
        }
    }
}

/// `num/den (decimal)`.
fn exact(x: &Frac) -> String {
    format!("{x} ({})", x.to_decimal(DECIMAL_DIGITS))
}

/// `num/den;decimal`, the CSV cell format.
fn cell(x: &Frac) -> String {
    format!("{x};{}", x.to_decimal(DECIMAL_DIGITS))
}

/// Solves an instance file with one rule and reports scores and audits.
pub fn cmd_solve(text: &str, rule: &Rule, k: Option<usize>, t: Option<usize>) -> CliResult<String> {
    let file = parse_instance(text).map_err(|e| CliError::Usage(e.to_string()))?;
    let inst = &file.instance;
    let mut out = format!("rule: {rule}\nm: {}\nn: {}\n", inst.m(), inst.n());
    match rule {
        Rule::Single(w) => {
            let scores = score_all(inst, w)?;
            let a = scores.argmax();
            out.push_str(&format!("winner: {a}\nscores:\n"));
            for (c, score) in scores.scores().iter().enumerate() {
                out.push_str(&format!("  {c}: {}\n", exact(score)));
            }
            out.push_str("audit:\n");
            for s in flexibility_grid(inst.m()) {
                out.push_str(&format!(
                    "  s={s}: {}\n",
                    exact(&empirical_fvr_point(inst, a, &s))
                ));
            }
        }
        Rule::Sequential | Rule::Expanded => {
            let (Some(k), Some(t)) = (k.or(file.k), t.or(file.t)) else {
                return usage(format!(
                    "rule {rule} needs k and t (flags --k/--t or file lines)"
                ));
            };
            let params = MultiParams::new(k, t, inst.m())?;
            let w = if *rule == Rule::Sequential {
                sequential_rule(inst, params)?
            } else {
                expanded_rule(inst, params).map_err(|e| match e {
                    FvrError::SizeLimit { .. } => CliError::Usage(format!("{e} (--rule seq)")),
                    other => other.into(),
                })?
            };
            let score = committee_score(inst, &w, t);
            out.push_str(&format!("k: {k}\nt: {t}\ncommittee: {w}\n"));
            out.push_str(&format!(
                "committee score: {} (at most n = {})\n",
                exact(&score),
                inst.n()
            ));
            out.push_str("audit:\n");
            for s in flexibility_grid(inst.m()) {
                let audit = empirical_fvr_committee(inst, &w, &s, t);
                let bound = multiwinner_bound(inst.m(), &s, k, t)?;
                out.push_str(&format!(
                    "  s={s}: {} bound {}\n",
                    exact(&audit),
                    exact(&bound)
                ));
            }
        }
    }
    Ok(out)
}

/// The threshold grid `{1/(2g), 2/(2g), …, (2g−1)/(2g)}`; `g = 1` gives `{1/2}`.
pub fn curve_grid(g: usize) -> Vec<Frac> {
    (1..2 * g).map(|j| Frac::ratio(j, 2 * g)).collect()
}

/// CSV of guarantee curves: header `s,optimal,<rule>...`, one row per grid
/// threshold, every cell `num/den;decimal`.
pub fn cmd_curve(rules: &[Rule], grid: usize) -> CliResult<String> {
    if grid == 0 {
        return usage("--s-grid must be at least 1");
    }
    let mut families = Vec::with_capacity(rules.len());
    for rule in rules {
        match rule {
            Rule::Single(w) => families.push(w),
            other => return usage(format!("rule {other} has no closed-form curve")),
        }
    }
    let mut out = String::from("s,optimal");
    for w in &families {
        out.push(',');
        out.push_str(&w.to_string());
    }
    out.push('\n');
    for s in curve_grid(grid) {
        out.push_str(&cell(&s));
        out.push(',');
        out.push_str(&cell(&(Frac::one() - &s)));
        for w in &families {
            out.push(',');
            out.push_str(&cell(&closed_form_fvr(w, &s)?.value));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Runs a generator and returns the instance file plus the special candidate,
/// if the generator has one.
pub fn cmd_gen(spec: &str, seed: Option<u64>) -> CliResult<(String, Option<usize>)> {
    let mut spec: GeneratorSpec = spec.parse()?;
    if spec.name == "random" && !spec.params.contains_key("seed") {
        let seed = seed.unwrap_or(DEFAULT_SEED);
        spec.params.insert("seed".into(), Frac::from(seed as usize));
    }
    let (inst, special) = spec.generate()?;
    Ok((serialize_instance(&inst), special))
}

/// Strong proportional veto core of a ranked file, or `EMPTY`.
pub fn cmd_pvc(text: &str) -> CliResult<String> {
    let profile = parse_ranked(text).map_err(|e| CliError::Usage(e.to_string()))?;
    let core = strong_pvc(&profile);
    Ok(if core.is_empty() {
        "EMPTY\n".into()
    } else {
        format!(
            "{}\n",
            core.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        )
    })
}

pub const SUITE_NAMES: &[&str] = &[
    "approval",
    "power",
    "optimal",
    "threshold",
    "sequential",
    "expanded",
    "reduction",
    "jr",
    "pvc",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n_max: usize,
    pub m_max: usize,
    pub budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            n_max: 4,
            m_max: 4,
            budget: fvr_core::oracles::DEFAULT_BUDGET,
        }
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    violations: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.violations += other.violations;
        self.first = self.first.or(other.first);
        self
    }
}

fn single_winner_check(inst: &Instance, rules: &[WeightFn], tally: &mut Tally) {
    for s in flexibility_grid(inst.m()) {
        for w in rules {
            let Ok(a) = score_all(inst, w).map(|v| v.argmax()) else {
                continue;
            };
            let bound = closed_form_fvr(w, &s).expect("named family").value;
            let audit = empirical_fvr_point(inst, a, &s);
            tally.check(audit <= bound, || {
                format!("{w} at s={s}: audit {audit} > {bound} on {inst:?}")
            });
        }
    }
}

fn threshold_check(inst: &Instance, tally: &mut Tally) {
    let grid = flexibility_grid(inst.m());
    for s0 in &grid {
        let w = WeightFn::threshold(s0.clone()).expect("grid point in (0, 1)");
        let a = score_all(inst, &w)
            .expect("threshold weights are total")
            .argmax();
        for s in &grid {
            let bound = closed_form_fvr(&w, s).expect("named family").value;
            let audit = empirical_fvr_point(inst, a, s);
            tally.check(audit <= bound, || {
                format!("{w} at s={s}: audit {audit} > {bound} on {inst:?}")
            });
        }
    }
}

fn committee_check(inst: &Instance, expanded: bool, tally: &mut Tally) {
    let m = inst.m();
    for k in 1..m {
        for t in 1..=k {
            let params = MultiParams::new(k, t, m).expect("valid by construction");
            let w = if expanded {
                match expanded_rule(inst, params) {
                    Ok(w) => w,
                    Err(_) => continue,
                }
            } else {
                let w = sequential_rule(inst, params).expect("valid params");
                let score = committee_score(inst, &w, t);
                tally.check(score <= Frac::from(inst.n()), || {
                    format!("score {score} > n on {inst:?} k={k} t={t}")
                });
                w
            };
            for s in flexibility_grid(m) {
                let audit = empirical_fvr_committee(inst, &w, &s, t);
                let bound = multiwinner_bound(m, &s, k, t).expect("valid params");
                tally.check(audit <= bound, || {
                    format!("audit {audit} > {bound} at s={s} k={k} t={t} on {inst:?}")
                });
            }
        }
    }
}

fn reduction_check(inst: &Instance, tally: &mut Tally) {
    let params = MultiParams::new(1, 1, inst.m()).expect("m >= 2");
    let a = ropt_winner(inst);
    let seq = sequential_rule(inst, params).expect("valid params");
    let exp = expanded_rule(inst, params).expect("m committees");
    tally.check(seq.members() == [a] && exp.members() == [a], || {
        format!("single-seat rules chose {seq} and {exp}, optimal winner {a} on {inst:?}")
    });
}

fn jr_check_all(inst: &Instance, tally: &mut Tally) {
    for k in 1..inst.m() {
        for w in all_committees(inst.m(), k) {
            let fast = jr_check(inst, &w).passes();
            tally.check(fast == jr_by_subsets(inst, &w), || {
                format!("{w}: checker disagrees on {inst:?}")
            });
        }
    }
}

/// Runs a named invariant suite over every profile with `n <= n_max` voters
/// and `2 <= m <= m_max` candidates.
pub fn cmd_verify(suite: &str, opts: VerifyOptions) -> CliResult<String> {
    if !SUITE_NAMES.contains(&suite) {
        return usage(format!(
            "unknown suite {suite:?}; valid suites: {}",
            SUITE_NAMES.join(", ")
        ));
    }
    if suite == "jr" && opts.n_max > 20 {
        return usage("suite jr enumerates voter subsets; use --n-max <= 20");
    }
    if suite == "pvc" {
        return verify_pvc(opts);
    }
    let mut instances: Vec<Instance> = Vec::new();
    for n in 1..=opts.n_max {
        for m in 2..=opts.m_max {
            let remaining = opts.budget - instances.len();
            instances.extend(enumerate_instances(n, m, remaining)?);
        }
    }
    let tally = instances
        .par_iter()
        .map(|inst| {
            let mut tally = Tally::default();
            match suite {
                "approval" => single_winner_check(inst, &[WeightFn::Constant], &mut tally),
                "power" => single_winner_check(
                    inst,
                    &[WeightFn::Power(1), WeightFn::Power(2), WeightFn::Power(3)],
                    &mut tally,
                ),
                "optimal" => single_winner_check(inst, &[WeightFn::ropt()], &mut tally),
                "threshold" => threshold_check(inst, &mut tally),
                "sequential" => committee_check(inst, false, &mut tally),
                "expanded" => committee_check(inst, true, &mut tally),
                "reduction" => reduction_check(inst, &mut tally),
                "jr" => jr_check_all(inst, &mut tally),
                _ => unreachable!("suite names checked above"),
            }
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    report(suite, instances.len(), "instances", tally)
}

fn verify_pvc(opts: VerifyOptions) -> CliResult<String> {
    if opts.n_max > 20 {
        return usage("suite pvc enumerates voter subsets; use --n-max <= 20");
    }
    let mut profiles = Vec::new();
    for n in 1..=opts.n_max {
        for m in 1..=opts.m_max {
            let remaining = opts.budget - profiles.len();
            profiles.extend(enumerate_ranked_profiles(n, m, remaining)?);
        }
    }
    let tally = profiles
        .par_iter()
        .map(|p| {
            let mut tally = Tally::default();
            tally.check(strong_pvc(p) == strong_pvc_by_subsets(p), || {
                format!("core mismatch on {p:?}")
            });
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    report("pvc", profiles.len(), "profiles", tally)
}

fn report(suite: &str, inputs: usize, noun: &str, tally: Tally) -> CliResult<String> {
    let mut out = format!(
        "suite {suite}: {inputs} {noun}, {} checks, {} violations\n",
        tally.checked, tally.violations
    );
    match tally.first {
        None => {
            out.push_str("PASS\n");
            Ok(out)
        }
        Some(first) => {
            out.push_str(&format!("first violation: {first}\nFAIL\n"));
            Err(CliError::Violations(out))
        }
    }
}
