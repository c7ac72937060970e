//! Argument parsing, dispatch and report rendering for the `ordval` binary.
//!
//! [`run`] never exits the process; it returns the exit code and the text
//! that would have been printed, which keeps the binary thin and the whole
//! command surface testable in-process.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ordval_core::checks::{run_suite, CheckConfig, SuiteOutcome, SUITES};
use ordval_core::classify::{arc_v0_collapse, classify_report, lr_definable_regular, non_singular};
use ordval_core::defval::{
    make_cut, member_Ds, member_Os, os_violation_witness, phi_holds, phi_witness, verify_violation,
    CaseTag, CutPoint,
};
use ordval_core::dsl::{
    canonical, parse_cut, parse_field, parse_group_expr, parse_hull_element, parse_series_expr,
    SyntaxKind,
};
use ordval_core::groups::{
    a_violation_witness, defsubgroup_member, find_nondense_witness, g_member, is_closed_in_hull,
    is_dense_in_hull, is_densely_ordered, is_discretely_ordered, is_divisible,
    is_immediate_in_hull, is_limit_point, is_regular, DefinableSet, GroupElement,
};
use ordval_core::series::{trunc_inverse, trunc_sqrt, verify_inverse, verify_sqrt, Series};
use ordval_core::{CoefficientField, Error, GroupDescriptor, HullElement, TruncatedResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ordval",
    version,
    about = "Ordered Hahn fields, their value groups and definable valuations"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural report for a group presentation.
    ClassifyGroup {
        group: String,
        #[arg(long, default_value_t = 50)]
        prime_bound: u64,
    },
    /// Full report for the Hahn field k((G)).
    ClassifyField {
        #[arg(long)]
        coeff: String,
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 50)]
        prime_bound: u64,
    },
    /// Decide one predicate.
    Predicate {
        #[arg(value_enum, ignore_case = true)]
        name: PredicateName,
        #[command(flatten)]
        ctx: Context,
    },
    /// Produce and re-verify a witness.
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        #[command(flatten)]
        ctx: Context,
        /// Number of terms for truncated expansions.
        #[arg(long, default_value_t = 4)]
        terms: usize,
        /// Case for `cut`.
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
    },
    /// Run seeded property suites.
    Check {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all", value_parser = suite_parser())]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "ORDVAL_SEED", default_value = "0x5EED", value_parser = parse_seed)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        prime_bound: u64,
    },
    /// Parse text and print its canonical form.
    Parse {
        #[arg(value_enum)]
        kind: KindArg,
        text: String,
        #[arg(long, default_value = "Q")]
        coeff: String,
        #[arg(long, default_value = "Z")]
        group: String,
    },
}

#[derive(Debug, clap::Args)]
struct Context {
    /// Coefficient field, e.g. `Q`, `Q(sqrt(2))`, `RC`.
    #[arg(long, default_value = "Q")]
    coeff: String,
    /// Group expression, e.g. `lex(loc{2}, loc{2})`.
    #[arg(long)]
    group: Option<String>,
    /// Element literal or series expression the predicate is evaluated at.
    #[arg(long)]
    at: Option<String>,
    /// Cut: an element literal `g0` or a residue value `a`.
    #[arg(long)]
    cut: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PredicateName {
    DenselyOrdered,
    DiscretelyOrdered,
    Regular,
    DenseInHull,
    Immediate,
    Closed,
    Divisible,
    NonSingular,
    LrDefinableRegular,
    ArcV0Collapse,
    Member,
    LimitPoint,
    InD,
    InA,
    InH,
    #[value(name = "Ds")]
    Ds,
    #[value(name = "Os")]
    Os,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessKind {
    Nondense,
    AViolation,
    Cut,
    Violation,
    Phi,
    Inverse,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Discrete,
    GroupLimitPoint,
    ResidueLimitPoint,
}

impl From<CaseArg> for CaseTag {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Discrete => CaseTag::Discrete,
            CaseArg::GroupLimitPoint => CaseTag::GroupLimitPoint,
            CaseArg::ResidueLimitPoint => CaseTag::ResidueLimitPoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Group,
    Element,
    Field,
    Coefficient,
    Series,
    Cut,
}

impl From<KindArg> for SyntaxKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Group => SyntaxKind::Group,
            KindArg::Element => SyntaxKind::Element,
            KindArg::Field => SyntaxKind::Field,
            KindArg::Coefficient => SyntaxKind::Coefficient,
            KindArg::Series => SyntaxKind::Series,
            KindArg::Cut => SyntaxKind::Cut,
        }
    }
}

fn suite_parser() -> clap::builder::PossibleValuesParser {
    let mut names = vec!["all", "thm45"];
    names.extend(SUITES);
    clap::builder::PossibleValuesParser::new(names)
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

/// What one invocation printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Core(Error),
    Missing(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok((code, value)) => Outcome {
            code,
            stdout: render(&value, cli.format),
            stderr: String::new(),
        },
        Err(f) => {
            let (code, msg) = match f {
                Failure::Core(e @ Error::Parse { .. }) => (EXIT_PARSE, e.to_string()),
                Failure::Core(e) => (EXIT_UNSUPPORTED, e.to_string()),
                Failure::Missing(flag) => (EXIT_PARSE, format!("missing required flag --{flag}")),
            };
            Outcome {
                code,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
    }
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", value, &mut lines);
            lines.into_iter().map(|l| l + "\n").collect()
        }
    }
}

/// `key.sub: value` lines in insertion order.
fn flatten(prefix: &str, value: &Value, out: &mut Vec<String>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push(format!("{prefix}: [{}]", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&(i + 1).to_string()), v, out);
            }
        }
        v => out.push(format!("{prefix}: {}", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn group_of(ctx: &Context) -> Res<GroupDescriptor> {
    let text = ctx.group.as_deref().ok_or(Failure::Missing("group"))?;
    Ok(parse_group_expr(text)?)
}

fn at_of(ctx: &Context) -> Res<&str> {
    ctx.at.as_deref().ok_or(Failure::Missing("at"))
}

fn cut_of(ctx: &Context) -> Res<CutPoint> {
    Ok(parse_cut(
        ctx.cut.as_deref().ok_or(Failure::Missing("cut"))?,
    )?)
}

fn series_of(ctx: &Context) -> Res<(CoefficientField, GroupDescriptor, Series)> {
    let field = parse_field(&ctx.coeff)?;
    let group = group_of(ctx)?;
    let x = parse_series_expr(at_of(ctx)?, &field, &group)?;
    Ok((field, group, x))
}

fn element_of(ctx: &Context, group: &GroupDescriptor) -> Res<HullElement> {
    Ok(parse_hull_element(at_of(ctx)?, group)?)
}

fn group_param(cut: &CutPoint) -> Res<HullElement> {
    match cut {
        CutPoint::GroupCut { g0 } => Ok(g0.clone()),
        CutPoint::ResidueCut { .. } => {
            Err(Error::Precondition("expected an element parameter".into()).into())
        }
    }
}

fn member_of_group(ctx: &Context, group: &GroupDescriptor) -> Res<GroupElement> {
    Ok(GroupElement::new(element_of(ctx, group)?, group)?)
}

fn dispatch(cmd: &Command) -> Res<(i32, Value)> {
    match cmd {
        Command::ClassifyGroup { group, prime_bound } => {
            let g = parse_group_expr(group)?;
            let report = classify_report(&CoefficientField::PlainRationals, &g, *prime_bound);
            let mut v = serde_json::to_value(report).expect("reports serialize");
            if let Value::Object(map) = &mut v {
                map.retain(|k, _| {
                    !matches!(k.as_str(), "field" | "thm45_cases" | "field_dense_in_rc")
                });
            }
            Ok((EXIT_OK, v))
        }
        Command::ClassifyField {
            coeff,
            group,
            prime_bound,
        } => {
            let k = parse_field(coeff)?;
            let g = parse_group_expr(group)?;
            let report = classify_report(&k, &g, *prime_bound);
            Ok((
                EXIT_OK,
                serde_json::to_value(report).expect("reports serialize"),
            ))
        }
        Command::Predicate { name, ctx } => {
            let value = predicate(*name, ctx)?;
            let key = name
                .to_possible_value()
                .expect("named")
                .get_name()
                .to_string();
            let mut map = Map::new();
            map.insert(key, Value::Bool(value));
            Ok((EXIT_OK, Value::Object(map)))
        }
        Command::Witness {
            kind,
            ctx,
            terms,
            case,
        } => Ok((EXIT_OK, witness(*kind, ctx, *terms, *case)?)),
        Command::Check {
            suite,
            trials,
            seed,
            prime_bound,
        } => {
            let cfg = CheckConfig {
                trials: *trials,
                seed: *seed,
                prime_bound: *prime_bound,
            };
            check(suite, &cfg)
        }
        Command::Parse {
            kind,
            text,
            coeff,
            group,
        } => {
            let field = parse_field(coeff)?;
            let g = parse_group_expr(group)?;
            let kind = SyntaxKind::from(*kind);
            let printed = canonical(kind, text, &field, &g)?;
            Ok((
                EXIT_OK,
                json!({ "kind": kind.name(), "canonical": printed }),
            ))
        }
    }
}

fn predicate(name: PredicateName, ctx: &Context) -> Res<bool> {
    use PredicateName::*;
    Ok(match name {
        DenselyOrdered => is_densely_ordered(&group_of(ctx)?),
        DiscretelyOrdered => is_discretely_ordered(&group_of(ctx)?),
        Regular => is_regular(&group_of(ctx)?),
        DenseInHull => is_dense_in_hull(&group_of(ctx)?),
        Immediate => is_immediate_in_hull(&group_of(ctx)?),
        Closed => is_closed_in_hull(&group_of(ctx)?),
        Divisible => is_divisible(&group_of(ctx)?),
        NonSingular => non_singular(&group_of(ctx)?),
        LrDefinableRegular => lr_definable_regular(&group_of(ctx)?),
        ArcV0Collapse => arc_v0_collapse(&group_of(ctx)?),
        Member => {
            let g = group_of(ctx)?;
            g_member(&element_of(ctx, &g)?, &g)?
        }
        LimitPoint => {
            let g = group_of(ctx)?;
            is_limit_point(&element_of(ctx, &g)?, &g)?
        }
        InD | InA | InH => {
            let g = group_of(ctx)?;
            let g0 = group_param(&cut_of(ctx)?)?;
            let x = member_of_group(ctx, &g)?;
            let which = match name {
                InD => DefinableSet::D,
                InA => DefinableSet::A,
                _ => DefinableSet::H,
            };
            defsubgroup_member(&g, &g0, &x, which)?
        }
        Ds => {
            let (_, _, x) = series_of(ctx)?;
            member_Ds(&x, &cut_of(ctx)?)?
        }
        Os => {
            let (_, _, x) = series_of(ctx)?;
            member_Os(&x, &cut_of(ctx)?)?
        }
        Phi => phi_holds(&series_of(ctx)?.2),
    })
}

fn truncated(res: &TruncatedResult, verified: bool) -> Value {
    json!({
        "terms": res.terms.to_string(),
        "guarantee": res.guarantee.value().to_string(),
        "verified": verified,
    })
}

fn witness(kind: WitnessKind, ctx: &Context, terms: usize, case: Option<CaseArg>) -> Res<Value> {
    Ok(match kind {
        WitnessKind::Nondense => {
            let g = group_of(ctx)?;
            json!({ "witness": find_nondense_witness(&g)?.to_string() })
        }
        WitnessKind::AViolation => {
            let g = group_of(ctx)?;
            let g0 = group_param(&cut_of(ctx)?)?;
            let x = member_of_group(ctx, &g)?;
            let d = a_violation_witness(&g, &g0, &x)?;
            let sum = GroupElement::new(x.value() + d.value(), &g)?;
            let verified = defsubgroup_member(&g, &g0, &d, DefinableSet::D)?
                && !defsubgroup_member(&g, &g0, &sum, DefinableSet::D)?;
            json!({ "witness": d.value().to_string(), "verified": verified })
        }
        WitnessKind::Cut => {
            let field = parse_field(&ctx.coeff)?;
            let g = group_of(ctx)?;
            let case = case.ok_or(Failure::Missing("case"))?;
            let cut = make_cut(&field, &g, case.into(), None)?;
            json!({ "case": CaseTag::from(case).to_string(), "cut": cut.to_string() })
        }
        WitnessKind::Violation => {
            let (_, _, x) = series_of(ctx)?;
            let cut = cut_of(ctx)?;
            let w = os_violation_witness(&x, &cut)?;
            json!({ "witness": w.to_string(), "verified": verify_violation(&x, &cut, &w)? })
        }
        WitnessKind::Phi => {
            let (_, _, x) = series_of(ctx)?;
            let res = phi_witness(&x, terms)?;
            let ok = verify_sqrt(&x, &res)?;
            truncated(&res, ok)
        }
        WitnessKind::Inverse => {
            let (_, _, x) = series_of(ctx)?;
            let res = trunc_inverse(&x, terms)?;
            let ok = verify_inverse(&x, &res)?;
            truncated(&res, ok)
        }
        WitnessKind::Sqrt => {
            let (_, _, x) = series_of(ctx)?;
            let res = trunc_sqrt(&x, terms)?;
            let ok = verify_sqrt(&x, &res)?;
            truncated(&res, ok)
        }
    })
}

fn suite_names(name: &str) -> Vec<&'static str> {
    match name {
        "all" => SUITES.to_vec(),
        "thm45" => vec!["cuts"],
        other => SUITES.iter().copied().filter(|s| *s == other).collect(),
    }
}

fn check(suite: &str, cfg: &CheckConfig) -> Res<(i32, Value)> {
    let outcomes: Vec<SuiteOutcome> = suite_names(suite)
        .into_iter()
        .map(|name| run_suite(name, cfg).expect("listed suites exist"))
        .collect();
    let failed = outcomes.iter().any(|o| !o.passed());
    let mut map = Map::new();
    map.insert("seed".into(), json!(format!("{:#x}", cfg.seed)));
    map.insert("trials".into(), json!(cfg.trials));
    for o in &outcomes {
        map.insert(
            o.suite.clone(),
            json!({
                "status": if o.passed() { "pass" } else { "fail" },
                "checks": o.checks,
                "violations": o.violation_count,
                "examples": o.violations,
            }),
        );
    }
    map.insert("status".into(), json!(if failed { "fail" } else { "pass" }));
    Ok((
        if failed { EXIT_VIOLATION } else { EXIT_OK },
        Value::Object(map),
    ))
}
