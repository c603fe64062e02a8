use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qmatroid::descriptor::{code_from_json, field_to_json, qmatroid_from_json, qmatroid_to_json};
use qmatroid::lattice::{SubspaceId, DEFAULT_LATTICE_BUDGET};
use qmatroid::projectivization as proj;
use qmatroid::qmatroid::DEFAULT_EXTENSION_CAP;
use qmatroid::rmcode::{self, RankMetricCode, DEFAULT_SUBCODE_BUDGET};
use qmatroid::weakiso::{self, DrScope, DEFAULT_SEARCH_NODES};
use qmatroid::{BiPoly, Error, ErrorClass, IntMat, Oracle, QMatroid, Result, WhitneyTable};

#[derive(Parser)]
#[command(name = "qmat", version, about = "Invariants of q-matroids and rank-metric codes")]
struct Cli {
    /// Maximum number of subspaces to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_LATTICE_BUDGET)]
    lattice_budget: u128,
    /// Maximum number of subcodes to enumerate per dimension.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBCODE_BUDGET)]
    subcode_budget: u128,
    /// Node limit for the flat-lattice isomorphism search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_NODES)]
    search_nodes: u64,
    /// Print a human-readable report instead of canonical JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Route {
    Direct,
    Substitution,
    Both,
}

#[derive(Copy, Clone, ValueEnum)]
enum Scope {
    Full,
    Flats,
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    Whitney,
    HigherWeights,
    SupportDist,
    WeakIso,
}

#[derive(Subcommand)]
enum Command {
    /// Whitney function of a q-matroid.
    Whitney {
        #[arg(long)]
        input: PathBuf,
    },
    /// Characteristic polynomial.
    Charpoly {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        route: Route,
    },
    /// Tutte polynomial T = Ω_B(R) and the round trip back to R.
    Tutte {
        #[arg(long)]
        input: PathBuf,
    },
    /// Higher weight distributions of a code.
    HigherWeights {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t_max: Option<usize>,
    },
    /// Support distribution of the t-dimensional subcodes.
    SupportDist {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Restrict to one subspace, given as JSON rows, e.g. "[[1,0,0,1,0]]".
        #[arg(long)]
        subspace: Option<String>,
    },
    /// Matrix identities for a code, or checks against golden files.
    VerifyIdentities {
        #[arg(long, required_unless_present = "golden")]
        input: Option<PathBuf>,
        /// Directory of golden files.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Whitney function of the projectivization; with --code, also the Hamming enumerators.
    Projectivize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        code: bool,
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Dimension-preserving isomorphism of the lattices of flats.
    WeakIso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Existence of a dimension- and rank-preserving bijection.
    DrBijection {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        scope: Scope,
    },
    /// Smallest extension degree m with non-negative predicted weights.
    MinM {
        #[arg(long, conflicts_with = "poly")]
        input: Option<PathBuf>,
        /// Whitney function as text; needs --q, --k and --n.
        #[arg(long, requires_all = ["q", "k", "n"])]
        poly: Option<String>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_EXTENSION_CAP)]
        cap: u32,
    },
    /// Desarguesian k-spread of F_q^n as a spread descriptor.
    MakeSpread {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Number of i-sets of projective points of F_q^n spanning an r-space.
    Gamma {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    /// Compare two inputs under one invariant.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long)]
        subspace: Option<String>,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::BadDescriptor(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::BadDescriptor(format!("{}: {e}", path.display())))
}

fn poly_json(p: &BiPoly) -> Value {
    p.to_json()
}

fn int_rows(m: &IntMat) -> Value {
    m.to_json()
}

struct Ctx {
    lattice_budget: u128,
    subcode_budget: u128,
    search_nodes: u64,
}

impl Ctx {
    fn qmatroid(&self, path: &Path) -> Result<QMatroid> {
        Ok(qmatroid_from_json(&read_json(path)?)?.with_lattice_budget(self.lattice_budget))
    }

    fn code(&self, path: &Path) -> Result<RankMetricCode> {
        code_from_json(&read_json(path)?)
    }
}

fn header(m: &QMatroid) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("q".into(), json!(m.q()));
    out.insert("n".into(), json!(m.n()));
    out.insert("k".into(), json!(m.k()));
    if let Oracle::Represented(g) = m.oracle() {
        out.insert("field".into(), field_to_json(g.field()));
    }
    out
}

fn parse_subspace(text: &str, q: u32, n: usize) -> Result<SubspaceId> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::BadDescriptor(format!("subspace: {e}")))?;
    SubspaceId::from_json(q, n, &v)
}

fn whitney_value(w: &WhitneyTable) -> Value {
    poly_json(&w.poly())
}

fn run(cli: &Cli) -> Result<Value> {
    let ctx = Ctx { lattice_budget: cli.lattice_budget, subcode_budget: cli.subcode_budget, search_nodes: cli.search_nodes };
    match &cli.command {
        Command::Whitney { input } => {
            let m = ctx.qmatroid(input)?;
            let w = m.whitney()?;
            let mut out = header(&m);
            out.insert("whitney".into(), whitney_value(&w));
            out.insert("subspaces".into(), json!(w.total().to_string()));
            Ok(Value::Object(out))
        }
        Command::Charpoly { input, route } => {
            let m = ctx.qmatroid(input)?;
            let mut out = header(&m);
            let direct = matches!(route, Route::Direct | Route::Both).then(|| m.char_poly_direct()).transpose()?;
            let subst = matches!(route, Route::Substitution | Route::Both).then(|| m.whitney()?.char_poly()).transpose()?;
            if let (Some(a), Some(b)) = (&direct, &subst) {
                if a != b {
                    return Err(Error::IdentityViolation { name: "characteristic polynomial routes".into(), row: 0, col: 0 });
                }
            }
            if let Some(d) = &direct {
                out.insert("direct".into(), poly_json(d));
            }
            if let Some(s) = &subst {
                out.insert("substitution".into(), poly_json(s));
            }
            Ok(Value::Object(out))
        }
        Command::Tutte { input } => {
            let m = ctx.qmatroid(input)?;
            let w = m.whitney()?;
            let t = w.tutte()?;
            let (a, _) = qmatroid::qmatroid::tutte_families(m.q());
            let back = a.apply(&t)?;
            let mut out = header(&m);
            out.insert("whitney".into(), whitney_value(&w));
            out.insert("tutte".into(), poly_json(&t));
            out.insert("round_trip".into(), json!(back == w.poly()));
            Ok(Value::Object(out))
        }
        Command::HigherWeights { input, t_max } => {
            let code = ctx.code(input)?;
            let t_max = t_max.unwrap_or(code.k());
            let dist = code.higher_distributions(t_max, ctx.subcode_budget)?;
            let mq = code.qmatroid()?.with_lattice_budget(ctx.lattice_budget);
            let w = mq.whitney()?;
            let predicted = rmcode::weight_matrix_from_whitney(&w, code.m() as u32);
            let a = dist.a_matrix();
            let agrees = (0..a.rows()).all(|i| (0..a.cols()).all(|t| a.get(i, t) == predicted.get(i, t)));
            let mut out = header(&mq);
            out.insert("m".into(), json!(code.m()));
            out.insert("a_matrix".into(), int_rows(&a));
            out.insert("enumerators".into(), Value::Array(dist.enumerators().iter().map(poly_json).collect()));
            out.insert("weight_enumerator".into(), poly_json(&code.weight_enumerator(ctx.subcode_budget)?));
            out.insert("matches_whitney_prediction".into(), json!(agrees));
            Ok(Value::Object(out))
        }
        Command::SupportDist { input, t, subspace } => {
            let code = ctx.code(input)?;
            let mq = code.qmatroid()?.with_lattice_budget(ctx.lattice_budget);
            let dist = code.higher_distributions(*t, ctx.subcode_budget)?;
            if *t > dist.t_max() {
                return Err(Error::InconsistentParameters(format!("t = {t} exceeds k = {}", code.k())));
            }
            let mut out = header(&mq);
            out.insert("t".into(), json!(t));
            match subspace {
                Some(text) => {
                    let v = parse_subspace(text, code.q(), code.n())?;
                    let count = dist.support_count(&v, *t);
                    let formula = rmcode::support_distribution_formula(&mq, code.m(), &v, *t)?;
                    out.insert("subspace".into(), v.to_json());
                    out.insert("count".into(), json!(count));
                    out.insert("formula".into(), json!(formula.to_string()));
                    if *t == 1 {
                        out.insert("codewords".into(), json!(((code.qm() - 1u32) * count).to_string()));
                    }
                }
                None => {
                    let supports: Vec<Value> = rmcode::sorted_supports(&dist, *t)
                        .into_iter()
                        .map(|(s, c)| json!({"subspace": s.to_json(), "count": c}))
                        .collect();
                    out.insert("supports".into(), Value::Array(supports));
                    out.insert("formula_check".into(), json!(rmcode::support_distribution_formula_check(&code, &dist, *t)?));
                }
            }
            Ok(Value::Object(out))
        }
        Command::VerifyIdentities { input, golden } => match (input, golden) {
            (_, Some(dir)) => golden::verify_dir(dir, &ctx),
            (Some(input), None) => {
                let code = ctx.code(input)?;
                let checks = rmcode::verify_higher_identities(&code, ctx.subcode_budget)?;
                let report = serde_json::to_value(&checks).expect("serializable");
                rmcode::require_all(&checks).map(|_| json!({"identities": report, "all_hold": true}))
            }
            (None, None) => Err(Error::BadDescriptor("need --input or --golden".into())),
        },
        Command::Projectivize { input, code, t } => {
            let m = ctx.qmatroid(input)?;
            let w = m.whitney()?;
            let r_pm = proj::whitney_projectivize(&w)?;
            let mut out = header(&m);
            out.insert("whitney".into(), whitney_value(&w));
            out.insert("projectivized_whitney".into(), poly_json(&r_pm));
            out.insert("points".into(), json!(proj::proj_size(m.n(), m.q()).to_string()));
            let mapping: Vec<Value> = proj::exponent_mapping(m.n(), m.q())?
                .into_iter()
                .map(|(i, x, y)| json!({"rank_weight": i, "x": x, "y": y}))
                .collect();
            out.insert("exponent_mapping".into(), Value::Array(mapping));
            if *code {
                let c = ctx.code(input)?;
                let dist = c.higher_distributions(*t, ctx.subcode_budget)?;
                if *t > dist.t_max() {
                    return Err(Error::InconsistentParameters(format!("t = {t} exceeds k = {}", c.k())));
                }
                let rank_side = dist.enumerator(*t);
                let hamming = proj::hamming_from_rank_enum(&rank_side, c.n(), c.q())?;
                let g_hat = proj::projectivize_code(&c)?;
                out.insert("t".into(), json!(t));
                out.insert("rank_enumerator".into(), poly_json(&rank_side));
                out.insert("hamming_enumerator".into(), poly_json(&hamming));
                out.insert("projectivized_generator".into(), g_hat.to_json());
            }
            Ok(Value::Object(out))
        }
        Command::WeakIso { a, b } => {
            let (m1, m2) = (ctx.qmatroid(a)?, ctx.qmatroid(b)?);
            let mapping = weakiso::weak_isomorphic(&m1, &m2, ctx.search_nodes)?;
            let dr = weakiso::dr_bijection(&m1, &m2, DrScope::FlatsOnly)?;
            Ok(json!({
                "weakly_isomorphic": mapping.is_some(),
                "mapping": mapping,
                "flat_tables": {"a": dr_table_json(&dr.table1), "b": dr_table_json(&dr.table2)},
            }))
        }
        Command::DrBijection { a, b, scope } => {
            let (m1, m2) = (ctx.qmatroid(a)?, ctx.qmatroid(b)?);
            let scope = match scope {
                Scope::Full => DrScope::FullLattice,
                Scope::Flats => DrScope::FlatsOnly,
            };
            let dr = weakiso::dr_bijection(&m1, &m2, scope)?;
            Ok(json!({
                "exists": dr.exists,
                "scope": scope,
                "tables": {"a": dr_table_json(&dr.table1), "b": dr_table_json(&dr.table2)},
                "first_difference": dr.first_difference.map(|(d, r)| json!({"dim": d, "rank": r})),
            }))
        }
        Command::MinM { input, poly, q, k, n, cap } => {
            let w = match (input, poly) {
                (Some(path), _) => ctx.qmatroid(path)?.whitney()?,
                (None, Some(text)) => WhitneyTable::from_poly(&BiPoly::parse(text)?, q.unwrap(), k.unwrap(), n.unwrap())?,
                (None, None) => return Err(Error::BadDescriptor("need --input or --poly".into())),
            };
            let m = w.min_extension_degree(*cap)?;
            Ok(json!({"min_m": m, "cap": cap, "whitney": whitney_value(&w)}))
        }
        Command::MakeSpread { q, n, k } => {
            let members = weakiso::construct_spread(*q, *n, *k)?;
            let m = QMatroid::spread(*q, *n, members)?;
            qmatroid_to_json(&m)
        }
        Command::Gamma { i, r, n, q } => {
            if qmatroid::gf::prime_field(*q).is_err() {
                return Err(Error::NonPrimeBase(*q));
            }
            Ok(json!({"i": i, "r": r, "n": n, "q": q, "gamma": proj::gamma(*i, *r, *n, *q).to_string()}))
        }
        Command::Compare { a, b, mode, t, subspace } => compare(&ctx, a, b, *mode, *t, subspace.as_deref()),
    }
}

fn dr_table_json(t: &[((usize, usize), u64)]) -> Value {
    Value::Array(t.iter().map(|((d, r), c)| json!({"dim": d, "rank": r, "count": c})).collect())
}

fn compare(ctx: &Ctx, a: &Path, b: &Path, mode: Mode, t: usize, subspace: Option<&str>) -> Result<Value> {
    match mode {
        Mode::Whitney => {
            let (m1, m2) = (ctx.qmatroid(a)?, ctx.qmatroid(b)?);
            let (w1, w2) = (m1.whitney()?.poly(), m2.whitney()?.poly());
            let diff = &w1 - &w2;
            let first = diff.terms().next().map(|(i, j, _)| json!({"i": i, "j": j, "a": w1.coeff(i, j).to_string(), "b": w2.coeff(i, j).to_string()}));
            Ok(json!({"mode": "whitney", "equal": diff.is_zero(), "first_difference": first, "a": poly_json(&w1), "b": poly_json(&w2)}))
        }
        Mode::HigherWeights => {
            let (c1, c2) = (ctx.code(a)?, ctx.code(b)?);
            check_compatible(&c1, &c2)?;
            let a1 = c1.higher_distributions(c1.k(), ctx.subcode_budget)?.a_matrix();
            let a2 = c2.higher_distributions(c2.k(), ctx.subcode_budget)?.a_matrix();
            let first = a1.first_difference(&a2).map(|(i, t)| json!({"i": i, "t": t}));
            Ok(json!({"mode": "higher-weights", "equal": first.is_none(), "first_difference": first, "a": int_rows(&a1), "b": int_rows(&a2)}))
        }
        Mode::SupportDist => {
            let (c1, c2) = (ctx.code(a)?, ctx.code(b)?);
            check_compatible(&c1, &c2)?;
            let text = subspace.ok_or_else(|| Error::BadDescriptor("support-dist comparison needs --subspace".into()))?;
            let v = parse_subspace(text, c1.q(), c1.n())?;
            let n1 = c1.higher_distributions(t, ctx.subcode_budget)?.support_count(&v, t);
            let n2 = c2.higher_distributions(t, ctx.subcode_budget)?.support_count(&v, t);
            Ok(json!({"mode": "support-dist", "t": t, "subspace": v.to_json(), "equal": n1 == n2, "a": n1, "b": n2}))
        }
        Mode::WeakIso => {
            let (m1, m2) = (ctx.qmatroid(a)?, ctx.qmatroid(b)?);
            let weak = weakiso::weak_isomorphic(&m1, &m2, ctx.search_nodes)?.is_some();
            let dr = weakiso::dr_bijection(&m1, &m2, DrScope::FullLattice)?;
            Ok(json!({
                "mode": "weak-iso",
                "equal": weak,
                "weakly_isomorphic": weak,
                "dr_bijection": dr.exists,
                "first_difference": dr.first_difference.map(|(d, r)| json!({"dim": d, "rank": r})),
            }))
        }
    }
}

fn check_compatible(c1: &RankMetricCode, c2: &RankMetricCode) -> Result<()> {
    if (c1.q(), c1.m(), c1.n(), c1.k()) != (c2.q(), c2.m(), c2.n(), c2.k()) {
        return Err(Error::InconsistentParameters("codes have incompatible parameters".into()));
    }
    Ok(())
}

mod golden {
    use super::*;

    fn check(name: &str, expected: &Value, actual: Value) -> Value {
        json!({"check": name, "pass": &actual == expected, "expected": expected, "actual": actual})
    }

    fn poly_text(p: &BiPoly) -> Value {
        Value::String(p.pretty())
    }

    /// Runs every `*.json` golden file in `dir`; inputs are resolved relative to the file.
    pub fn verify_dir(dir: &Path, ctx: &Ctx) -> Result<Value> {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::BadDescriptor(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut reports = Vec::new();
        let mut all = true;
        for f in files {
            let g = read_json(&f)?;
            let base = f.parent().unwrap_or(Path::new("."));
            let mut checks = Vec::new();
            let input = g.get("input").and_then(Value::as_str).map(|s| base.join(s));
            if let Some(path) = &input {
                let m = ctx.qmatroid(path)?;
                let w = m.whitney()?;
                if let Some(e) = g.get("whitney") {
                    checks.push(check("whitney", e, poly_text(&w.poly())));
                }
                if let Some(e) = g.get("min_m") {
                    checks.push(check("min_m", e, json!(w.min_extension_degree(DEFAULT_EXTENSION_CAP)?)));
                }
                if g.get("a_matrix").is_some() || g.get("weight_enumerator").is_some() || g.get("support_counts").is_some() {
                    let code = ctx.code(path)?;
                    let dist = code.higher_distributions(code.k(), ctx.subcode_budget)?;
                    if let Some(e) = g.get("a_matrix") {
                        let rows: Vec<Vec<String>> = dist.a_matrix().to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                        checks.push(check("a_matrix", e, json!(rows)));
                    }
                    if let Some(e) = g.get("weight_enumerator") {
                        checks.push(check("weight_enumerator", e, poly_text(&code.weight_enumerator(ctx.subcode_budget)?)));
                    }
                    if let Some(list) = g.get("support_counts").and_then(Value::as_array) {
                        for entry in list {
                            let v = SubspaceId::from_json(code.q(), code.n(), &entry["subspace"])?;
                            let t = entry["t"].as_u64().unwrap_or(1) as usize;
                            checks.push(check("support_count", &entry["count"], json!(dist.support_count(&v, t))));
                        }
                    }
                    let ids = rmcode::verify_higher_identities(&code, ctx.subcode_budget)?;
                    checks.push(check("matrix_identities", &json!(true), json!(ids.iter().all(|c| c.holds))));
                }
            }
            all &= checks.iter().all(|c| c["pass"] == json!(true));
            reports.push(json!({"file": f.file_name().map(|s| s.to_string_lossy().into_owned()), "checks": checks}));
        }
        if all {
            Ok(json!({"golden": reports, "all_pass": true}))
        } else {
            eprintln!("{}", serde_json::to_string_pretty(&json!({"golden": reports})).expect("serializable"));
            Err(Error::IdentityViolation { name: "golden file".into(), row: 0, col: 0 })
        }
    }
}

fn render_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) if map.contains_key("pretty") && map.contains_key("terms") => {
            out.push_str(map["pretty"].as_str().unwrap_or(""));
            out.push('\n');
        }
        Value::Object(map) => {
            out.push('\n');
            for (k, x) in map {
                out.push_str(&format!("{pad}{k}: "));
                render_pretty(x, indent + 2, out);
            }
        }
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(|r| r.as_array().is_some_and(|c| c.iter().all(|x| !x.is_object() && !x.is_array()))) => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.as_array().unwrap().iter().map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string())).collect())
                .collect();
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
            out.push('\n');
            for r in cells {
                let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
                out.push_str(&format!("{pad}{}\n", line.join(" ")));
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            out.push('\n');
            for x in items {
                out.push_str(&format!("{pad}- "));
                render_pretty(x, indent + 2, out);
            }
        }
        Value::String(s) => {
            out.push_str(s);
            out.push('\n');
        }
        other => {
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Validation => 1,
        ErrorClass::Budget => 2,
        ErrorClass::Internal => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            if cli.pretty {
                let mut s = String::new();
                render_pretty(&v, 0, &mut s);
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                let _ = write!(std::io::stdout(), "{}", s.trim_start());
            } else {
                let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string(&v).expect("serializable"));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let obj = json!({"error": {"code": e.code(), "message": e.to_string()}});
            println!("{}", serde_json::to_string(&obj).expect("serializable"));
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
