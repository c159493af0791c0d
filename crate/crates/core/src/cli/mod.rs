//! Command implementations. Each returns an [`Outcome`] carrying the exit
//! status, the human report and the JSON report.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ririg::algebra::{validate_ririg, Elem};
use ririg::catalog::{catalog_build, Catalog, CatalogFlags};
use ririg::compat::{laf_representation, tuples, CompatContext, CompatReport, FiniteFunction, Verdict, Witness};
use ririg::congruence::{all_congruences, all_congruences_direct, cep_check, filter_from_theta, SUBUNIVERSE_CAP};
use ririg::enumerate::{canonical_form, Constraint, Constraints};
use ririg::filters::{all_ifilters, generate_filter, generate_filter_blocks_stabilized, generate_filter_lambda, IFilter};
use ririg::io::{parse_algebra_file, parse_function, read_text};
use ririg::irreducible::{is_simple, is_subdirectly_irreducible, ElemWitness};
use ririg::laws::ririg_law_violations;
use ririg::logic::lddt::{lddt_witness, lddt_witness_lambda, LddtBounds};
use ririg::logic::semantics::{SoundnessOutcome, ENTAILMENT_VALUATION_CAP};
use ririg::logic::{formula_entails, soundness_check, EntailmentReport, Proof};
use ririg::modal::ModalSignature;
use ririg::term::Term;
use ririg::varieties::{fg_intersection_check, incomparable_pair, rc_report};
use ririg::{Error, FiniteIModalRirig, IBlock, SubsetMask};

use crate::{CatalogArgs, Cli, Command};

mod verify;

pub const HOLDS: u8 = 0;
pub const FAILS: u8 = 1;
pub const USAGE: u8 = 2;
pub const UNDECIDED: u8 = 3;

pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn new(code: u8, text: String, json: Value) -> Self {
        Outcome { code, text, json }
    }

    pub fn from_error(e: Error) -> Self {
        Outcome::new(USAGE, format!("error: {e}"), json!({ "error": e.to_string() }))
    }
}

type Res<T> = Result<T, Error>;

fn status(ok: bool) -> u8 {
    if ok {
        HOLDS
    } else {
        FAILS
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn load(path: &Path) -> Res<FiniteIModalRirig> {
    ririg::io::read_algebra(path)
}

fn label(a: &FiniteIModalRirig, x: Elem) -> String {
    a.label(x).to_string()
}

fn labels(a: &FiniteIModalRirig, xs: impl IntoIterator<Item = Elem>) -> Vec<String> {
    xs.into_iter().map(|x| label(a, x)).collect()
}

fn set(a: &FiniteIModalRirig, xs: impl IntoIterator<Item = Elem>) -> String {
    format!("{{{}}}", labels(a, xs).join(", "))
}

fn tuple(a: &FiniteIModalRirig, xs: &[Elem]) -> String {
    format!("({})", labels(a, xs.iter().copied()).join(", "))
}

fn blocks_text(a: &FiniteIModalRirig, bs: &[IBlock]) -> String {
    if bs.is_empty() {
        return "1".into();
    }
    bs.iter()
        .map(|b| format!("{}(x)", b.display(a.signature())))
        .collect::<Vec<_>>()
        .join(" * ")
}

fn blocks_json(a: &FiniteIModalRirig, bs: &[IBlock]) -> Value {
    json!(bs.iter().map(|b| b.display(a.signature()).to_string()).collect::<Vec<_>>())
}

/// Replays a witness when `--verify-witness` is on, appending the result.
fn replay(cli: &Cli, out: &mut Outcome, check: impl FnOnce() -> Result<(), String>) {
    if !cli.verify_witness || out.code != FAILS {
        return;
    }
    match check() {
        Ok(()) => {
            out.text.push_str("witness: verified\n");
            out.json["witness_verified"] = json!(true);
        }
        Err(e) => {
            out.text.push_str(&format!("witness: REPLAY FAILED ({e})\n"));
            out.json["witness_verified"] = json!(false);
            out.code = USAGE;
        }
    }
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    match &cli.command {
        Command::Check { file } => check(cli, file),
        Command::Filters { file } => filters(file),
        Command::Congruences { file, direct } => congruences(file, *direct),
        Command::GenFilter { file, set } => gen_filter(file, set),
        Command::Simple { file } => simple(cli, file),
        Command::Si { file } => si(cli, file),
        Command::Classify { file, catalog } => classify(file, catalog.as_deref()),
        Command::Compatible {
            file,
            function,
            block_len,
            random,
            arity,
        } => match (function, random) {
            (Some(f), _) => compatible(cli, file, f, *block_len),
            (None, Some(count)) => compatible_random(cli, file, *count, *arity, *block_len),
            (None, None) => Err(Error::InvalidArgument("give a function file or --random N".into())),
        },
        Command::Laf { file, function, points } => laf(cli, file, function, points.as_deref()),
        Command::Enumerate {
            max_size,
            modals,
            require,
            out,
        } => enumerate(*max_size, *modals, require, out.as_deref()),
        Command::Prove { proof, catalog } => prove(cli, proof, catalog),
        Command::Entails { goal, gamma, catalog } => entails(cli, goal, gamma, catalog),
        Command::Lddt {
            psi,
            gamma,
            delta,
            block_len,
            product_len,
            lambda,
            max_l,
            catalog,
        } => lddt(psi, gamma, delta, *block_len, *product_len, lambda.then_some(*max_l), catalog),
        Command::Cep { file, catalog } => cep(cli, file.as_deref(), catalog),
    }
}

fn check(cli: &Cli, path: &Path) -> Res<Outcome> {
    let text = read_text(path)?;
    let raw = match parse_algebra_file(&text)?.to_raw() {
        Err(Error::NotResiduated { b, c }) => {
            let text = format!("ririg: FAILED (no residual {b} -> {c}; the product is not residuated)\n");
            return Ok(Outcome::new(FAILS, text, json!({ "ririg": { "passed": false, "not_residuated": [b, c] } })));
        }
        other => other?,
    };
    let report = validate_ririg(&raw.tables)?;
    let mut out = String::new();
    let mut parts = Vec::new();
    let mut modal_json = serde_json::Map::new();
    let mut modal_ok = true;
    let mut first_failure = None;
    if report.passed {
        parts.push("ririg: ok".to_string());
        let base = raw.base()?;
        let laws = ririg_law_violations(&base);
        let a = FiniteIModalRirig::new_unvalidated(base, raw.signature.clone(), raw.modals.clone())?;
        let modal = a.validate_modal();
        for name in raw.signature.names() {
            let fails: Vec<_> = modal
                .failures
                .iter()
                .filter(|f| f.axiom.split_once(": ").map(|(n, _)| n) == Some(name.as_str()))
                .collect();
            if fails.is_empty() {
                parts.push(format!("modal {name}: ok"));
            } else {
                modal_ok = false;
                let desc: Vec<String> = fails
                    .iter()
                    .map(|f| format!("{} at {}", f.axiom.split_once(": ").unwrap().1, tuple(&a, &f.witness)))
                    .collect();
                parts.push(format!("modal {name}: FAILED ({})", desc.join("; ")));
                if first_failure.is_none() {
                    let f = (*fails[0]).clone();
                    let a = a.clone();
                    first_failure = Some(Box::new(move || verify::modal_failure(&a, &f)) as Box<dyn FnOnce() -> Result<(), String>>);
                }
            }
            modal_json.insert(name.clone(), json!(fails));
        }
        writeln!(out, "{}", parts.join(", ")).unwrap();
        if !laws.is_empty() {
            // Consequences of the axioms; a failure here is a library bug.
            writeln!(out, "derived laws violated: {laws:?}").unwrap();
        }
        let ok = modal_ok && laws.is_empty();
        let mut o = Outcome::new(
            status(ok),
            out,
            json!({ "ririg": report, "modals": modal_json, "derived_law_failures": laws, "imp_given": raw.imp_given }),
        );
        if let Some(f) = first_failure {
            replay(cli, &mut o, f);
        }
        return Ok(o);
    }
    writeln!(out, "ririg: FAILED ({report})").unwrap();
    let mut o = Outcome::new(FAILS, out, json!({ "ririg": report }));
    let tables = raw.tables.clone();
    let f = report.failures[0].clone();
    replay(cli, &mut o, || verify::ririg_failure(&tables, &f));
    Ok(o)
}

fn filters(path: &Path) -> Res<Outcome> {
    let a = load(path)?;
    let fs = all_ifilters(&a);
    let mut out = format!("{} I-filters:\n", fs.len());
    for f in &fs {
        writeln!(out, "  {}", set(&a, f.to_vec())).unwrap();
    }
    let list: Vec<Vec<String>> = fs.iter().map(|f| labels(&a, f.to_vec())).collect();
    Ok(Outcome::new(HOLDS, out, json!({ "count": fs.len(), "filters": list })))
}

fn classes_text(a: &FiniteIModalRirig, theta: &ririg::congruence::Congruence) -> String {
    theta
        .classes()
        .iter()
        .map(|c| labels(a, c.iter().copied()).join(" "))
        .collect::<Vec<_>>()
        .join(" | ")
}

fn congruences(path: &Path, direct: bool) -> Res<Outcome> {
    let a = load(path)?;
    let cons = all_congruences(&a);
    let mut out = format!("{} congruences:\n", cons.len());
    let mut list = Vec::new();
    for theta in &cons {
        let f = filter_from_theta(&a, theta)?;
        writeln!(out, "  [{}]  1/θ = {}", classes_text(&a, theta), set(&a, f.to_vec())).unwrap();
        list.push(json!({ "classes": theta.classes().iter().map(|c| labels(&a, c.iter().copied())).collect::<Vec<_>>(), "filter": labels(&a, f.to_vec()) }));
    }
    let mut code = HOLDS;
    let mut report = json!({ "count": cons.len(), "congruences": list });
    if direct {
        let mut scan = all_congruences_direct(&a, ririg::congruence::DIRECT_CONGRUENCE_CAP)?;
        let mut via = cons.clone();
        scan.sort_by(|x, y| x.class_of().cmp(y.class_of()));
        via.sort_by(|x, y| x.class_of().cmp(y.class_of()));
        let agree = scan == via;
        writeln!(out, "partition scan: {} congruences, {}", scan.len(), if agree { "agrees" } else { "DISAGREES" }).unwrap();
        report["direct_agrees"] = json!(agree);
        code = status(agree);
    }
    Ok(Outcome::new(code, out, report))
}

fn gen_filter(path: &Path, elems: &[String]) -> Res<Outcome> {
    let a = load(path)?;
    let xs = elems
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| a.parse_elem(s))
        .collect::<Res<Vec<_>>>()?;
    let x = SubsetMask::from_elems(a.size(), xs.iter().copied());
    let closure = generate_filter(&a, x);
    let (blocks, rounds) = generate_filter_blocks_stabilized(&a, x);
    let lambda = generate_filter_lambda(&a, x);
    let agree = closure.mask() == blocks && closure == lambda;
    let mut out = String::new();
    writeln!(out, "Fg({}) = {}", set(&a, xs.iter().copied()), set(&a, closure.to_vec())).unwrap();
    writeln!(out, "  blocks route: {} (stable at length {rounds})", set(&a, blocks.iter())).unwrap();
    writeln!(out, "  lambda route: {}", set(&a, lambda.to_vec())).unwrap();
    writeln!(out, "  routes {}", if agree { "agree" } else { "DISAGREE" }).unwrap();
    Ok(Outcome::new(
        status(agree),
        out,
        json!({
            "set": labels(&a, xs.iter().copied()),
            "filter": labels(&a, closure.to_vec()),
            "blocks": labels(&a, blocks.iter()),
            "blocks_stable_at": rounds,
            "lambda": labels(&a, lambda.to_vec()),
            "agree": agree,
        }),
    ))
}

fn witness_lines(a: &FiniteIModalRirig, ws: &[ElemWitness], target: Elem, out: &mut String) -> Value {
    let mut list = Vec::new();
    for w in ws {
        let (l, p) = w.lambda;
        writeln!(
            out,
            "  x = {}: {} <= {}; lambda^{l}(x)^{p} <= {}",
            label(a, w.elem),
            blocks_text(a, &w.blocks),
            label(a, target),
            label(a, target)
        )
        .unwrap();
        list.push(json!({ "elem": label(a, w.elem), "blocks": blocks_json(a, &w.blocks), "lambda": { "l": l, "p": p } }));
    }
    json!(list)
}

fn simple(cli: &Cli, path: &Path) -> Res<Outcome> {
    let a = load(path)?;
    let r = is_simple(&a)?;
    let mut out = format!("simple: {}\n", yes_no(r.simple));
    let mut report = json!({ "simple": r.simple });
    if r.simple {
        report["witnesses"] = witness_lines(&a, &r.witnesses, a.zero(), &mut out);
    }
    if let Some(x) = r.counterexample {
        let f = generate_filter_of_one(&a, x);
        writeln!(out, "  Fg({}) = {} omits {}", label(&a, x), set(&a, f.to_vec()), label(&a, a.zero())).unwrap();
        report["counterexample"] = json!({ "elem": label(&a, x), "filter": labels(&a, f.to_vec()) });
    }
    let mut o = Outcome::new(status(r.simple), out, report);
    if let Some(x) = r.counterexample {
        replay(cli, &mut o, || verify::not_simple(&a, x));
    }
    Ok(o)
}

fn generate_filter_of_one(a: &FiniteIModalRirig, x: Elem) -> IFilter {
    ririg::filters::generate_filter_of(a, [x])
}

/// Two distinct minimal nontrivial I-filters; they meet in `{1}`.
fn separating_filters(a: &FiniteIModalRirig) -> Option<(IFilter, IFilter)> {
    let nontrivial: Vec<IFilter> = all_ifilters(a).into_iter().filter(|f| !f.is_trivial(a)).collect();
    let minimal: Vec<IFilter> = nontrivial
        .iter()
        .copied()
        .filter(|f| !nontrivial.iter().any(|g| g != f && g.mask().is_subset(f.mask())))
        .collect();
    match minimal.as_slice() {
        [f, g, ..] => Some((*f, *g)),
        _ => None,
    }
}

fn si(cli: &Cli, path: &Path) -> Res<Outcome> {
    let a = load(path)?;
    let r = is_subdirectly_irreducible(&a)?;
    let mut out = format!("subdirectly irreducible: {}\n", yes_no(r.si));
    let mut report = json!({ "si": r.si });
    if let (Some(b), Some(m)) = (r.witness, r.monolith) {
        writeln!(out, "  b = {}, monolith filter {}", label(&a, b), set(&a, m.to_vec())).unwrap();
        report["b"] = json!(label(&a, b));
        report["monolith"] = json!(labels(&a, m.to_vec()));
        report["witnesses"] = witness_lines(&a, &r.witnesses, b, &mut out);
    }
    let separated = if r.si { None } else { separating_filters(&a) };
    if let Some((f, g)) = separated {
        writeln!(out, "  I-filters {} and {} meet in {{{}}}", set(&a, f.to_vec()), set(&a, g.to_vec()), label(&a, a.one())).unwrap();
        report["separating_filters"] = json!([labels(&a, f.to_vec()), labels(&a, g.to_vec())]);
    }
    let mut o = Outcome::new(status(r.si), out, report);
    if let Some((f, g)) = separated {
        replay(cli, &mut o, || verify::not_si(&a, f.mask(), g.mask()));
    }
    Ok(o)
}

fn classify(path: &Path, catalog: Option<&Path>) -> Res<Outcome> {
    let a = load(path)?;
    let flags = CatalogFlags::compute(&a)?;
    let rc = rc_report(&a);
    let form = canonical_form(&a);
    let n_filters = all_ifilters(&a).len();
    let mut out = String::new();
    writeln!(out, "size {}, modals [{}]", a.size(), a.signature().names().join(", ")).unwrap();
    writeln!(out, "trivial: {}", yes_no(flags.trivial)).unwrap();
    match incomparable_pair(&a) {
        None => writeln!(out, "chain: yes").unwrap(),
        Some((x, y)) => writeln!(out, "chain: no ({} and {} incomparable)", label(&a, x), label(&a, y)).unwrap(),
    }
    let show = |o: &Option<String>| o.clone().map_or("yes".to_string(), |w| format!("no ({w})"));
    let contractive = rc.contractive.map(|(j, x)| format!("{}({}) > {}", a.signature().names()[j], label(&a, x), label(&a, x)));
    let prelinear = rc.prelinear.map(|(x, y)| format!("at {}", tuple(&a, &[x, y])));
    let cm = rc.cm.map(|(j, x, y)| format!("{} at {}", a.signature().names()[j], tuple(&a, &[x, y])));
    writeln!(out, "contractive: {}", show(&contractive)).unwrap();
    writeln!(out, "prelinear: {}", show(&prelinear)).unwrap();
    writeln!(out, "(Cm): {}", show(&cm)).unwrap();
    writeln!(out, "in R_C: {}", yes_no(flags.in_rc)).unwrap();
    writeln!(out, "simple: {}", yes_no(flags.simple)).unwrap();
    writeln!(out, "subdirectly irreducible: {}", yes_no(flags.si)).unwrap();
    writeln!(out, "I-filters (= congruences): {n_filters}").unwrap();
    let mut report = json!({
        "size": a.size(),
        "modals": a.signature().names(),
        "flags": flags,
        "rc": { "contractive": contractive, "prelinear": prelinear, "cm": cm },
        "filters": n_filters,
        "canonical_form": form.to_hex(),
    });
    if flags.in_rc {
        let fg = fg_intersection_check(&a)?;
        writeln!(out, "Fg(x|y) = Fg(x) & Fg(y): {}", fg.map_or("yes".into(), |(x, y)| format!("no at {}", tuple(&a, &[x, y])))).unwrap();
        report["fg_join_meet"] = json!(fg.is_none());
    }
    writeln!(out, "canonical form: {}", form.to_hex()).unwrap();
    if let Some(p) = catalog {
        let c = Catalog::load(p)?;
        let hit = c.entries.iter().position(|e| e.form == form);
        match hit {
            Some(i) => writeln!(out, "catalog: entry {i}").unwrap(),
            None => writeln!(out, "catalog: not present").unwrap(),
        }
        report["catalog_entry"] = json!(hit);
    }
    Ok(Outcome::new(HOLDS, out, report))
}

fn witness_json(a: &FiniteIModalRirig, r: &CompatReport) -> Value {
    let failure = r.failure.as_ref().map(|f| {
        json!({
            "left": labels(a, f.left.iter().copied()),
            "right": labels(a, f.right.iter().copied()),
            "congruence": f.congruence.as_ref().map(|t| classes_text(a, t)),
        })
    });
    json!({ "verdict": r.verdict, "failure": failure })
}

fn compatible(cli: &Cli, path: &Path, fpath: &Path, bound: Option<usize>) -> Res<Outcome> {
    let a = load(path)?;
    let f = parse_function(&read_text(fpath)?, &a)?;
    let ctx = CompatContext::new(&a, bound, ririg::congruence::DIRECT_CONGRUENCE_CAP);
    let direct = match ctx.direct(&f) {
        Ok(r) => Some(r),
        Err(Error::SizeCap { .. }) => None,
        Err(e) => return Err(e),
    };
    let blocks = ctx.blocks(&f)?;
    let lambda = ctx.lambda(&f)?;
    let exact = direct.as_ref().unwrap_or(&lambda);
    let compatible = exact.compatible();
    let decided: Vec<bool> = [direct.as_ref(), Some(&blocks), Some(&lambda)]
        .into_iter()
        .flatten()
        .filter(|r| r.verdict != Verdict::Undecided)
        .map(|r| r.compatible())
        .collect();
    let agree = decided.iter().all(|&v| v == compatible);
    let mut out = format!("compatible: {}\n", yes_no(compatible));
    let verdict = |r: &CompatReport| match r.verdict {
        Verdict::Compatible => "compatible",
        Verdict::NotCompatible => "not compatible",
        Verdict::Undecided => "undecided",
    };
    match &direct {
        Some(r) => writeln!(out, "  congruence route: {}", verdict(r)).unwrap(),
        None => writeln!(out, "  congruence route: skipped (size above {})", ririg::congruence::DIRECT_CONGRUENCE_CAP).unwrap(),
    }
    writeln!(out, "  block route: {}{}", verdict(&blocks), bound.map_or(String::new(), |b| format!(" (blocks up to length {b})"))).unwrap();
    writeln!(out, "  lambda route: {}", verdict(&lambda)).unwrap();
    if compatible {
        for w in blocks.witnesses.iter().zip(&lambda.witnesses).take(8) {
            let (bw, lw) = w;
            let bs = match &bw.witness {
                Witness::Blocks(slots) => slots.iter().map(|s| blocks_text(&a, s)).collect::<Vec<_>>().join(" ; "),
                other => format!("{other:?}"),
            };
            let lp = match lw.witness {
                Witness::Lambda { l, p } => format!("l={l}, p={p}"),
                ref other => format!("{other:?}"),
            };
            writeln!(out, "  {} ~ {}: blocks [{bs}], lambda {lp}", tuple(&a, &bw.left), tuple(&a, &bw.right)).unwrap();
        }
        if blocks.witnesses.len() > 8 {
            writeln!(out, "  ... {} pairs in all (see --json)", blocks.witnesses.len()).unwrap();
        }
    } else if let Some(fail) = &exact.failure {
        write!(out, "  {} ~ {} but f{} !~ f{}", tuple(&a, &fail.left), tuple(&a, &fail.right), tuple(&a, &fail.left), tuple(&a, &fail.right)).unwrap();
        if let Some(theta) = &fail.congruence {
            write!(out, " under [{}]", classes_text(&a, theta)).unwrap();
        }
        out.push('\n');
    }
    if !agree {
        writeln!(out, "  ROUTES DISAGREE").unwrap();
    }
    let report = json!({
        "compatible": compatible,
        "agree": agree,
        "direct": direct.as_ref().map(|r| witness_json(&a, r)),
        "blocks": { "verdict": blocks.verdict, "witnesses": blocks.witnesses, "failure": witness_json(&a, &blocks)["failure"] },
        "lambda": { "verdict": lambda.verdict, "witnesses": lambda.witnesses, "failure": witness_json(&a, &lambda)["failure"] },
    });
    let code = if !agree { USAGE } else { status(compatible) };
    let mut o = Outcome::new(code, out, report);
    if let Some(fail) = direct.as_ref().and_then(|r| r.failure.clone()) {
        if let Some(theta) = fail.congruence {
            replay(cli, &mut o, || verify::not_compatible(&a, &theta, &fail.left, &fail.right, |x| f.eval(x)));
        }
    }
    Ok(o)
}

fn compatible_random(cli: &Cli, path: &Path, count: usize, arity: usize, bound: Option<usize>) -> Res<Outcome> {
    let a = load(path)?;
    let n = a.size();
    let ctx = CompatContext::new(&a, bound, ririg::congruence::DIRECT_CONGRUENCE_CAP);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let cells = n.pow(arity as u32);
    let (mut compatible, mut undecided) = (0usize, 0usize);
    for i in 0..count {
        let table: Vec<Elem> = (0..cells).map(|_| rng.gen_range(0..n)).collect();
        let f = FiniteFunction::new(n, arity, table)?;
        let direct = ctx.direct(&f)?;
        let blocks = ctx.blocks(&f)?;
        let lambda = ctx.lambda(&f)?;
        if blocks.verdict == Verdict::Undecided {
            undecided += 1;
        }
        let blocks_ok = blocks.verdict == Verdict::Undecided || blocks.compatible() == direct.compatible();
        if !blocks_ok || lambda.compatible() != direct.compatible() {
            let text = format!(
                "function {i} (table {:?}): congruence route {:?}, block route {:?}, lambda route {:?}\n",
                f.table(),
                direct.verdict,
                blocks.verdict,
                lambda.verdict
            );
            return Ok(Outcome::new(FAILS, text, json!({ "disagreement": i, "table": f.table() })));
        }
        compatible += usize::from(direct.compatible());
    }
    let text = format!(
        "{count} random functions of arity {arity} (seed {:#x}): {compatible} compatible, all routes agree{}\n",
        cli.seed,
        if undecided > 0 { format!(", block route undecided on {undecided}") } else { String::new() }
    );
    Ok(Outcome::new(
        HOLDS,
        text,
        json!({ "count": count, "arity": arity, "seed": cli.seed, "compatible": compatible, "undecided": undecided, "agree": true }),
    ))
}

fn laf(cli: &Cli, path: &Path, fpath: &Path, points: Option<&str>) -> Res<Outcome> {
    let a = load(path)?;
    let f = parse_function(&read_text(fpath)?, &a)?;
    let pts: Vec<Vec<Elem>> = match points {
        None => tuples(a.size(), f.arity()).collect(),
        Some(spec) => spec
            .split(';')
            .map(|p| p.split(',').map(|x| a.parse_elem(x)).collect::<Res<Vec<_>>>())
            .collect::<Res<_>>()?,
    };
    match laf_representation(&a, &f, &pts) {
        Ok(r) => {
            let mut out = format!("representation verified: {}\n", yes_no(r.verified));
            for anchor in &r.anchors {
                writeln!(out, "  anchor {}: (l, p) = {:?}", tuple(&a, &anchor.anchor), anchor.exponent).unwrap();
            }
            for p in &r.points {
                writeln!(out, "  f{} = {} = join {}", tuple(&a, &p.point), label(&a, p.value), tuple(&a, &p.terms)).unwrap();
            }
            Ok(Outcome::new(status(r.verified), out, serde_json::to_value(&r).expect("serializable")))
        }
        Err(Error::NotCompatible) => {
            let r = ririg::compat::is_compatible_direct(&a, &f)?;
            let fail = r.failure.clone().expect("incompatible");
            let mut out = String::from("not compatible; no polynomial representation\n");
            writeln!(out, "  {} ~ {} but images separated", tuple(&a, &fail.left), tuple(&a, &fail.right)).unwrap();
            let mut o = Outcome::new(FAILS, out, json!({ "compatible": false, "failure": witness_json(&a, &r)["failure"] }));
            if let Some(theta) = fail.congruence {
                replay(cli, &mut o, || verify::not_compatible(&a, &theta, &fail.left, &fail.right, |x| f.eval(x)));
            }
            Ok(o)
        }
        Err(e) => Err(e),
    }
}

fn constraints(require: &[String]) -> Res<Constraints> {
    require
        .iter()
        .flat_map(|r| r.split(','))
        .try_fold(Constraints::none(), |c, r| Ok(c.with(r.trim().parse::<Constraint>()?)))
}

fn enumerate(max_size: usize, modals: usize, require: &[String], out_path: Option<&Path>) -> Res<Outcome> {
    let c = catalog_build(max_size, modals, constraints(require)?)?;
    let mut out = format!("{} algebras (size <= {max_size}, <= {modals} modals)\n", c.len());
    let mut rows = Vec::new();
    for n in 1..=max_size {
        for k in 0..=modals {
            let es: Vec<_> = c.entries.iter().filter(|e| e.algebra.size() == n && e.algebra.k() == k).collect();
            let count = |p: fn(&CatalogFlags) -> bool| es.iter().filter(|e| p(&e.flags)).count();
            let row = json!({
                "size": n, "modals": k, "count": es.len(),
                "simple": count(|f| f.simple), "si": count(|f| f.si),
                "chain": count(|f| f.chain), "in_rc": count(|f| f.in_rc),
            });
            writeln!(
                out,
                "  size {n}, {k} modals: {} (simple {}, SI {}, chains {}, in R_C {})",
                es.len(),
                row["simple"],
                row["si"],
                row["chain"],
                row["in_rc"]
            )
            .unwrap();
            rows.push(row);
        }
    }
    if let Some(p) = out_path {
        c.save(p)?;
        writeln!(out, "catalog written to {}", p.display()).unwrap();
    }
    let forms: Vec<String> = c.entries.iter().map(|e| e.form.to_hex()).collect();
    Ok(Outcome::new(HOLDS, out, json!({ "count": c.len(), "by_size": rows, "forms": forms })))
}

fn load_catalog(args: &CatalogArgs) -> Res<Catalog> {
    match &args.catalog {
        Some(p) => Catalog::load(p),
        None => catalog_build(args.max_size, args.modals, constraints(&args.require)?),
    }
}

fn parse_formulas(texts: &[String]) -> Res<Vec<Term>> {
    texts.iter().map(|t| Term::parse(t)).collect()
}

fn entailment_text(c: &[FiniteIModalRirig], r: &EntailmentReport, out: &mut String) {
    match &r.countermodel {
        None => writeln!(
            out,
            "holds in all {} checked catalog algebras ({} skipped for signature)\n  note: {}",
            r.checked.len(),
            r.skipped.len(),
            r.note
        )
        .unwrap(),
        Some(cm) => {
            let a = &c[cm.algebra];
            let val: Vec<String> = cm.valuation.iter().map(|(v, x)| format!("v{v} = {}", label(a, *x))).collect();
            writeln!(out, "countermodel: catalog entry {} (size {}), {}", cm.algebra, a.size(), val.join(", ")).unwrap();
        }
    }
}

fn replay_countermodel(c: &[FiniteIModalRirig], gamma: &[Term], goal: &Term, r: &EntailmentReport) -> Result<(), String> {
    let cm = r.countermodel.as_ref().ok_or("no countermodel")?;
    let a = &c[cm.algebra];
    let width = cm.valuation.iter().map(|(v, _)| *v as usize + 1).max().unwrap_or(0);
    let mut env = vec![a.zero(); width];
    for (v, x) in &cm.valuation {
        env[*v as usize] = *x;
    }
    let eval = |t: &Term| t.eval(a, &env).map_err(|e| e.to_string());
    let premises = gamma.iter().map(eval).collect::<Result<Vec<_>, _>>()?;
    verify::countermodel(&premises, eval(goal)?, a.one())
}

fn prove(cli: &Cli, path: &Path, args: &CatalogArgs) -> Res<Outcome> {
    let proof = Proof::parse(&read_text(path)?)?;
    let catalog = load_catalog(args)?;
    let algebras = catalog.algebras();
    let mut out = String::new();
    match soundness_check(&proof, &algebras, ENTAILMENT_VALUATION_CAP)? {
        SoundnessOutcome::Rejected(e) => {
            writeln!(out, "proof rejected at {e}").unwrap();
            Ok(Outcome::new(FAILS, out, json!({ "checked": false, "error": e })))
        }
        SoundnessOutcome::Checked(r) => {
            let conclusion = proof.conclusion().expect("checked proofs are nonempty");
            writeln!(out, "proof checks: {} lines, {} hypotheses", proof.lines.len(), proof.hypotheses.len()).unwrap();
            writeln!(out, "conclusion: {conclusion}").unwrap();
            write!(out, "soundness over the catalog ({} algebras): ", algebras.len()).unwrap();
            entailment_text(&algebras, &r, &mut out);
            let code = status(r.holds);
            let mut o = Outcome::new(code, out, json!({ "checked": true, "lines": proof.lines.len(), "conclusion": conclusion, "soundness": r }));
            replay(cli, &mut o, || replay_countermodel(&algebras, &proof.hypotheses, conclusion, &r));
            Ok(o)
        }
    }
}

fn entails(cli: &Cli, goal: &str, gamma: &[String], args: &CatalogArgs) -> Res<Outcome> {
    let goal = Term::parse(goal)?;
    let gamma = parse_formulas(gamma)?;
    let algebras = load_catalog(args)?.algebras();
    let r = formula_entails(&algebras, &gamma, &goal, ENTAILMENT_VALUATION_CAP)?;
    let mut out = String::new();
    entailment_text(&algebras, &r, &mut out);
    let mut o = Outcome::new(status(r.holds), out, serde_json::to_value(&r).expect("serializable"));
    replay(cli, &mut o, || replay_countermodel(&algebras, &gamma, &goal, &r));
    Ok(o)
}

fn lddt(
    psi: &str,
    gamma: &[String],
    delta: &[String],
    block_len: usize,
    product_len: usize,
    max_l: Option<usize>,
    args: &CatalogArgs,
) -> Res<Outcome> {
    let psi = Term::parse(psi)?;
    let gamma = parse_formulas(gamma)?;
    let delta = parse_formulas(delta)?;
    let catalog = load_catalog(args)?;
    let sig = ModalSignature::numbered(catalog.params.modals);
    let algebras = catalog.algebras();
    let found = match max_l {
        None => lddt_witness(
            &gamma,
            &delta,
            &psi,
            &algebras,
            &sig,
            LddtBounds { block_len, product_len },
            ENTAILMENT_VALUATION_CAP,
        )?,
        Some(l) => lddt_witness_lambda(&gamma, &delta, &psi, &algebras, &sig, l, product_len, ENTAILMENT_VALUATION_CAP)?,
    };
    match found {
        Some(w) => {
            let items: Vec<String> = w.items.iter().map(|i| format!("{}(delta[{}])", i.block, i.delta)).collect();
            let text = format!(
                "witness: {}\n  formula: {}\n  certified over {} catalog algebras ({})\n",
                if items.is_empty() { "empty product".to_string() } else { items.join(" * ") },
                w.formula,
                w.certificate.checked.len(),
                w.certificate.note
            );
            Ok(Outcome::new(HOLDS, text, serde_json::to_value(&w).expect("serializable")))
        }
        None => {
            let text = match max_l {
                None => format!("no witness with blocks up to length {block_len} and at most {product_len} factors\n"),
                Some(l) => format!("no witness with lambda exponent up to {l} and at most {product_len} factors\n"),
            };
            Ok(Outcome::new(UNDECIDED, text, json!({ "witness": null, "block_len": block_len, "product_len": product_len, "max_l": max_l })))
        }
    }
}

fn cep(cli: &Cli, file: Option<&Path>, args: &CatalogArgs) -> Res<Outcome> {
    let algebras = match file {
        Some(p) => vec![load(p)?],
        None => load_catalog(args)?.algebras(),
    };
    let mut out = String::new();
    for (i, a) in algebras.iter().enumerate() {
        if let Some(cx) = cep_check(a, SUBUNIVERSE_CAP)? {
            let (b, embed) = a.subalgebra(cx.subuniverse)?;
            let classes: Vec<String> = cx
                .theta
                .classes()
                .iter()
                .map(|c| labels(a, c.iter().map(|&j| embed[j])).join(" "))
                .collect();
            writeln!(
                out,
                "CEP fails{}: subalgebra {} with congruence [{}] has no extension",
                if file.is_none() { format!(" for catalog entry {i}") } else { String::new() },
                set(a, cx.subuniverse.iter()),
                classes.join(" | ")
            )
            .unwrap();
            drop(b);
            let mut o = Outcome::new(
                FAILS,
                out,
                json!({ "cep": false, "entry": i, "subuniverse": labels(a, cx.subuniverse.iter()), "theta": classes }),
            );
            let a = a.clone();
            replay(cli, &mut o, || verify::no_extension(&a, cx.subuniverse, &cx.theta));
            return Ok(o);
        }
    }
    writeln!(out, "CEP holds for {} algebra{}", algebras.len(), if algebras.len() == 1 { "" } else { "s" }).unwrap();
    Ok(Outcome::new(HOLDS, out, json!({ "cep": true, "checked": algebras.len() })))
}
