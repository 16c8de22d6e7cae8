use kwahl_core::hj::{parse_decimal, remainders};
use kwahl_core::markov::{gm_numbers, gm_tree, square_theorem_check, wahl_partner_search};
use kwahl_core::mckay::{lesr, special_reps};
use kwahl_core::verify::{self, Params, Report, Suite};
use kwahl_core::wahl::{classify, length_encoding, word_string};
use kwahl_core::zerocf::{alpha, enumerate_k, extremal_pairs, generate_zero_cfs};
use kwahl_core::{expand, hj_dual, Error, HJChain, ReducedFraction};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::{Cli, Command, GmAction, ZeroAction};

/// Longest dual chain `expand` prints.
const MAX_PRINTED_DUAL: u64 = 1_000_000;

pub enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// What a command prints: plain lines, JSON records, and whether a check failed.
#[derive(Default)]
pub struct Emit {
    pub text: Vec<String>,
    pub records: Vec<Value>,
    pub failed: bool,
}

impl Emit {
    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }
}

type Out = Result<Emit, Failure>;

fn strs<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn chain_arg(s: &str) -> Result<HJChain, Failure> {
    Ok(s.parse::<HJChain>()?)
}

fn single_k(cli: &Cli) -> Result<u64, Failure> {
    match cli.k {
        None => Ok(0),
        Some((lo, hi)) if lo == hi => Ok(lo),
        Some((lo, hi)) => Err(Failure::Usage(format!(
            "expected a single k, got {lo}..{hi}"
        ))),
    }
}

fn bound_big(cli: &Cli, default: u64) -> Result<BigInt, Failure> {
    match &cli.bound {
        None => Ok(BigInt::from(default)),
        Some(s) => Ok(parse_decimal(s)?),
    }
}

fn bound_u64(cli: &Cli) -> Result<Option<u64>, Failure> {
    cli.bound
        .as_deref()
        .map(|s| {
            s.parse::<u64>()
                .ok()
                .filter(|_| s.bytes().all(|b| b.is_ascii_digit()))
                .ok_or_else(|| Failure::Usage(format!("invalid bound {s:?}")))
        })
        .transpose()
}

pub fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Expand { r, a } => cmd_expand(r, a),
        Command::Classify { chain } => cmd_classify(chain),
        Command::Zerocf { action } => cmd_zerocf(action),
        Command::Gm { action } => cmd_gm(cli, action),
        Command::Verify { suite } => cmd_verify(cli, suite),
    }
}

fn cmd_expand(r: &str, a: &str) -> Out {
    let f = ReducedFraction::new(parse_decimal(r)?, parse_decimal(a)?)?;
    let chain = expand(&f);
    let rem = remainders(&f);
    // The dual chain has sum(b_i - 2) + 1 entries; only build it when small.
    let dual_len: BigInt = chain.total() - BigInt::from(2 * chain.len()) + 1;
    let dual = (dual_len <= BigInt::from(MAX_PRINTED_DUAL)).then(|| hj_dual(&f));
    let dual_text = dual.as_ref().map_or_else(
        || format!("({dual_len} entries, not shown)"),
        |d| d.to_string(),
    );
    let special = special_reps(&f);
    let lesr = lesr(&f);
    let mut out = Emit::default();
    out.line(format!("fraction    {f}"));
    out.line(format!("chain       {chain}"));
    out.line(format!("remainders  {}", strs(rem.values()).join(",")));
    out.line(format!("dual        {dual_text}"));
    out.line(format!(
        "special     ({})",
        strs(special.indices()).join(",")
    ));
    out.line(format!("lesr        {lesr}"));
    out.records.push(json!({
        "command": "expand",
        "r": f.r().to_string(),
        "a": f.a().to_string(),
        "chain": chain.to_string(),
        "remainders": strs(rem.values()),
        "dual": dual.map(|d| d.to_string()),
        "dual_len": dual_len.to_string(),
        "special": strs(special.indices()),
        "lesr": lesr.blocks(),
    }));
    Ok(out)
}

fn cmd_classify(chain: &str) -> Out {
    let c = chain_arg(chain)?;
    let cls = classify(&c);
    let encoding = length_encoding(&c).ok();
    let k = cls
        .kind
        .wahl_k()
        .map(|k| k.to_string())
        .or_else(|| match &cls.kind {
            kwahl_core::wahl::WahlKind::DualWahl(k) => Some(k.to_string()),
            _ => None,
        });
    let word = word_string(&cls.word);
    let mut out = Emit::default();
    out.line(format!("chain     {c}"));
    out.line(format!("fraction  {}", c.value()));
    out.line(format!("kind      {}", cls.kind));
    if let Some(k) = &k {
        out.line(format!("k         {k}"));
    }
    out.line(format!(
        "word      {}",
        if word.is_empty() { "-" } else { &word }
    ));
    out.line(format!("terminal  {}", cls.terminal));
    if let Some(e) = &encoding {
        out.line(format!("encoding  {e}"));
    }
    out.records.push(json!({
        "command": "classify",
        "chain": c.to_string(),
        "fraction": c.value().to_string(),
        "kind": cls.kind.to_string(),
        "k": k,
        "word": word,
        "terminal": cls.terminal.to_string(),
        "length_encoding": encoding.as_ref().map(|e| e.blocks().to_vec()),
    }));
    Ok(out)
}

fn cmd_zerocf(action: &ZeroAction) -> Out {
    let mut out = Emit::default();
    match action {
        ZeroAction::KSet { chain } => {
            let c = chain_arg(chain)?;
            for w in enumerate_k(&c)? {
                out.line(format!("{}  weight {}", w.zero, w.weight));
                out.records.push(json!({
                    "command": "zerocf k-set",
                    "base": c.to_string(),
                    "zero": w.zero.to_string(),
                    "weight": w.weight.to_string(),
                }));
            }
        }
        ZeroAction::Alpha { chain } => {
            let c = chain_arg(chain)?;
            let a = alpha(&c)?;
            let witnesses: Vec<String> = enumerate_k(&c)?
                .into_iter()
                .filter(|w| w.weight == a)
                .map(|w| w.zero.to_string())
                .collect();
            out.line(a.to_string());
            out.records.push(json!({
                "command": "zerocf alpha",
                "chain": c.to_string(),
                "alpha": a.to_string(),
                "witnesses": witnesses,
            }));
        }
        ZeroAction::Extremal { chain } => {
            let c = chain_arg(chain)?;
            for (i, j) in extremal_pairs(&c)? {
                out.line(format!("({i},{j})"));
                out.records.push(json!({
                    "command": "zerocf extremal",
                    "chain": c.to_string(),
                    "pair": [i, j],
                }));
            }
        }
        ZeroAction::AllOfLength { e } => {
            for z in generate_zero_cfs(*e)? {
                out.line(z.to_string());
                out.records.push(json!({
                    "command": "zerocf all-of-length",
                    "length": e,
                    "zero": z.to_string(),
                }));
            }
        }
    }
    Ok(out)
}

fn cmd_gm(cli: &Cli, action: &GmAction) -> Out {
    let mut out = Emit::default();
    match action {
        GmAction::Tree => {
            let k = single_k(cli)?;
            for t in gm_tree(k, &bound_big(cli, 100)?)? {
                out.line(t.to_string());
                out.records.push(json!({
                    "command": "gm tree",
                    "k": k,
                    "triple": strs(t.entries()),
                }));
            }
        }
        GmAction::Numbers => {
            let k = single_k(cli)?;
            for m in gm_numbers(k, &bound_big(cli, 100)?)? {
                out.line(m.to_string());
                out.records.push(json!({
                    "command": "gm numbers",
                    "k": k,
                    "number": m.to_string(),
                }));
            }
        }
        GmAction::SquareCheck => {
            let bound = bound_big(cli, 100)?;
            match square_theorem_check(&bound) {
                Ok(rep) => {
                    out.line(format!(
                        "pass  bound {}  0-GM triples {}  2-GM triples {}",
                        rep.bound, rep.forward, rep.converse
                    ));
                    out.records.push(json!({
                        "command": "gm square-check",
                        "passed": true,
                        "report": rep,
                    }));
                }
                Err(Error::Counterexample { reproducer, detail }) => {
                    out.failed = true;
                    out.line(format!("FAIL  {detail}"));
                    out.records.push(json!({
                        "command": "gm square-check",
                        "passed": false,
                        "failure": {"reproducer": reproducer, "detail": detail},
                    }));
                }
                Err(e) => return Err(e.into()),
            }
        }
        GmAction::WahlPartners { m } => {
            let k = single_k(cli)?;
            let m = parse_decimal(m)?;
            for u in wahl_partner_search(&m, k)? {
                let chain = expand(&ReducedFraction::new(m.clone(), u.clone())?);
                out.line(format!("{u}  {m}/{u} = {chain}"));
                out.records.push(json!({
                    "command": "gm wahl-partners",
                    "k": k,
                    "m": m.to_string(),
                    "u": u.to_string(),
                    "chain": chain.to_string(),
                }));
            }
        }
    }
    Ok(out)
}

fn cmd_verify(cli: &Cli, suite: &str) -> Out {
    let params = Params {
        k: cli.k,
        depth: cli.depth,
        bound: bound_u64(cli)?,
        max_len: cli.max_len,
    };
    let reports = if suite == "all" {
        verify::run_all(&params)?
    } else {
        let s: Suite = suite.parse().map_err(|_| {
            Failure::Usage(format!(
                "unknown suite {suite:?}; expected one of {}, all",
                Suite::ALL.map(|s| s.name()).join(", ")
            ))
        })?;
        vec![verify::run(s, &params)?]
    };
    let mut out = Emit::default();
    for r in &reports {
        render(&mut out, r);
        out.failed |= !r.passed();
        out.records.push(json!(r));
    }
    Ok(out)
}

fn render(out: &mut Emit, r: &Report) {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    out.line(format!(
        "{status} {:<10} cases {:>6}  failures {:>5}  {} ms",
        r.suite, r.cases, r.failure_count, r.wall_time_ms
    ));
    for (key, n) in &r.stats {
        out.line(format!("    {key} = {n}"));
    }
    for note in &r.notes {
        out.line(format!("    note: {note}"));
    }
    for f in &r.failures {
        out.line(format!("    {}  ({})", f.reproducer, f.detail));
    }
    if r.failure_count > r.failures.len() {
        out.line(format!(
            "    ... {} more",
            r.failure_count - r.failures.len()
        ));
    }
}
