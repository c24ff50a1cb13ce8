use std::fmt::Write as _;

use nilorbit::classify::{partition_of, signed_diagram_of};
use nilorbit::deligne::{assemble_r, build_chain, deformation_space, kato_phi, DeformationConstraints, DeligneSystem1};
use nilorbit::diagrams::{admissible_diagram, admissible_partition, dokovic_leq, enumerate, hasse, to_dot, GroupKind, OrbitLabel, Partition, SignedDiagram};
use nilorbit::exact::text::{filtration_to_json, mat_from_json, mat_to_json, subspace_to_json, vec_from_json};
use nilorbit::exact::{signature, Field};
use nilorbit::filtrations::{check_relative_monodromy, deligne_bigrading, monodromy_filtration, relative_monodromy_filtration, Filtration, Grading};
use nilorbit::fixtures::{by_name, unpolarizable_pair, Fixture};
use nilorbit::hodge::{check_dh, check_imhm, chromosome, diamond_of, polarization_feasibility, DeligneHodgeSystem, ImhmData};
use nilorbit::report::Report;
use nilorbit::weight2::{build_model, build_root_sl2s_with_signs, classify_h2x2_type, cone_check, root_signs, ConeSpec};
use nilorbit::{Error, QMat, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{render, Cli, Command, FieldArg, GroupArgs, Kind, Pick};

pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// `false` for a checked negative answer.
    pub ok: bool,
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Res<T> = Result<T, CliError>;

fn read_value(input: &str) -> Res<Value> {
    let text = if input == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(input).map_err(|e| CliError::Input(format!("cannot read {input}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{input}: {e}")))
}

fn load(input: &str) -> Res<Fixture> {
    if let Some(name) = input.strip_prefix("fixture:") {
        return by_name(name).ok_or_else(|| CliError::Input(format!("no built-in system named {name}")));
    }
    Ok(Fixture::from_json(&read_value(input)?)?)
}

fn pick_n(fx: &Fixture, index: Option<usize>) -> Res<QMat> {
    if fx.ns.is_empty() {
        return Err(CliError::Input("the system has no nilpotents".into()));
    }
    match index {
        Some(j) if j >= 1 && j <= fx.ns.len() => Ok(fx.ns[j - 1].clone()),
        Some(j) => Err(CliError::Input(format!("index {j} out of range 1..={}", fx.ns.len()))),
        None => Ok(fx.ns.iter().skip(1).fold(fx.ns[0].clone(), |acc, n| &acc + n)),
    }
}

fn need_q(fx: &Fixture) -> Res<&QMat> {
    fx.q.as_ref().ok_or_else(|| CliError::Input("this command needs the form `q`".into()))
}

fn report_text(title: &str, rep: &Report) -> String {
    let mut s = format!("{title}: {}\n", verdict(rep.passed()));
    for (name, ok) in rep.summary() {
        let _ = writeln!(s, "  {name}: {}", verdict(ok));
    }
    for c in rep.failures() {
        let _ = writeln!(s, "  failed {}: {}", c.name, c.detail);
    }
    s
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn report_json(rep: &Report) -> Value {
    let items: serde_json::Map<String, Value> = rep.summary().into_iter().map(|(n, ok)| (n, json!(ok))).collect();
    json!({"passed": rep.passed(), "items": items, "checks": rep.checks})
}

fn group_kind(g: &GroupArgs) -> Res<GroupKind> {
    let need = |x: Option<u32>, what: &str| x.ok_or_else(|| CliError::Input(format!("--{what} is required")));
    Ok(match (g.kind, g.field) {
        (Kind::Sp, FieldArg::C) => GroupKind::SpComplex { n: need(g.n, "n")? },
        (Kind::Sp, FieldArg::R) => GroupKind::SpReal { n: need(g.n, "n")? },
        (Kind::O, FieldArg::C) => GroupKind::OComplex { n: need(g.n, "n")? },
        (Kind::O, FieldArg::R) => GroupKind::OReal { a: need(g.p, "p")?, b: need(g.q, "q")? },
    })
}

fn group_name(k: GroupKind) -> String {
    match k {
        GroupKind::SpComplex { n } => format!("Sp({n},C)"),
        GroupKind::SpReal { n } => format!("Sp({n},R)"),
        GroupKind::OComplex { n } => format!("O({n},C)"),
        GroupKind::OReal { a, b } => format!("O({a},{b})"),
    }
}

/// Real group preserving `q`: symplectic in odd weight, orthogonal in even.
fn real_kind(q: &QMat, weight: i64) -> Res<GroupKind> {
    let n = q.rows() as u32;
    if weight.rem_euclid(2) == 1 {
        Ok(GroupKind::SpReal { n })
    } else {
        let s = signature(q)?;
        Ok(GroupKind::OReal { a: s.pos as u32, b: s.neg as u32 })
    }
}

fn complex_kind(k: GroupKind) -> GroupKind {
    match k {
        GroupKind::SpReal { n } => GroupKind::SpComplex { n },
        GroupKind::OReal { a, b } => GroupKind::OComplex { n: a + b },
        other => other,
    }
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    match &cli.command {
        Command::Classify(p) => classify(p),
        Command::Enumerate(g) => enumerate_cmd(g),
        Command::Order { lhs, rhs } => order(lhs, rhs),
        Command::Hasse(g) => hasse_cmd(g),
        Command::Wfilt { pick, center } => wfilt(pick, *center),
        Command::Relwfilt(p) => relwfilt(p),
        Command::DeligneChain { input } => deligne_chain(input),
        Command::Deform { input, slot, isometry, commute, morphism } => deform(input, *slot, *isometry, commute, *morphism),
        Command::Assemble { input, last_n } => assemble(input, last_n.as_deref()),
        Command::Phi { input, a } => phi(input, a),
        Command::DhCheck { input } => dh_check(input),
        Command::ImhmCheck { input } => imhm_check(input),
        Command::Polarize { input, k } => polarize(input, *k),
        Command::Chromosome(p) => chromosome_cmd(p),
        Command::Weight2Model { a, b, c, d } => weight2_model(*a, *b, *c, *d),
        Command::ConeCheck { model, cone, random_probes, seed } => cone_check_cmd(model, cone, *random_probes, *seed),
        Command::RootSl2 { m, subset, cone, table } => root_sl2(*m, subset, *cone, *table),
        Command::Counterexample => counterexample(),
    }
}

fn classify(p: &Pick) -> Res<Outcome> {
    let fx = load(&p.input)?;
    let n = pick_n(&fx, p.index)?;
    let part = partition_of(&n)?;
    let mut text = format!("partition: {part}\n");
    let mut js = json!({"partition": part.parts()});
    let mut ok = true;
    if let Some(q) = &fx.q {
        let d = signed_diagram_of(&n, q, fx.weight)?;
        let kind = real_kind(q, fx.weight)?;
        let adm = admissible_diagram(kind, &d) && admissible_partition(complex_kind(kind), &part);
        ok = adm;
        let _ = writeln!(text, "diagram: {d}\ngroup: {}\nadmissible: {adm}", group_name(kind));
        js["diagram"] = json!(d.to_string());
        js["group"] = json!(group_name(kind));
        js["admissible"] = json!(adm);
    }
    Ok(Outcome { text, json: js, ok })
}

fn enumerate_cmd(g: &GroupArgs) -> Res<Outcome> {
    let k = group_kind(g)?;
    let labels: Vec<String> = enumerate(k)?.iter().map(|l| l.to_string()).collect();
    let what = if k.is_real() { "signed diagrams" } else { "partitions" };
    let mut text = format!("{}: {} {what}\n", group_name(k), labels.len());
    for l in &labels {
        let _ = writeln!(text, "  {l}");
    }
    Ok(Outcome { text, json: json!({"group": group_name(k), "count": labels.len(), "orbits": labels}), ok: true })
}

enum OrbitSpec {
    Diagram(SignedDiagram),
    Partition(Partition),
}

fn orbit_spec(input: &str) -> Res<OrbitSpec> {
    if !input.starts_with("fixture:") {
        let v = read_value(input)?;
        if let Some(d) = v.get("diagram") {
            let s = d.as_str().ok_or_else(|| CliError::Input("`diagram` must be a string".into()))?;
            return Ok(OrbitSpec::Diagram(s.parse()?));
        }
        if let Some(p) = v.get("partition") {
            let parts: Vec<u32> = serde_json::from_value(p.clone()).map_err(|e| CliError::Input(format!("partition: {e}")))?;
            return Ok(OrbitSpec::Partition(Partition::new(parts)));
        }
    }
    let fx = load(input)?;
    let n = pick_n(&fx, None)?;
    Ok(match &fx.q {
        Some(q) => OrbitSpec::Diagram(signed_diagram_of(&n, q, fx.weight)?),
        None => OrbitSpec::Partition(partition_of(&n)?),
    })
}

fn order(lhs: &str, rhs: &str) -> Res<Outcome> {
    let (a, b) = (orbit_spec(lhs)?, orbit_spec(rhs)?);
    let label = |o: &OrbitSpec| match o {
        OrbitSpec::Diagram(d) => d.to_string(),
        OrbitSpec::Partition(p) => p.to_string(),
    };
    let (leq, geq) = match (&a, &b) {
        (OrbitSpec::Diagram(x), OrbitSpec::Diagram(y)) => (dokovic_leq(x, y), dokovic_leq(y, x)),
        _ => {
            let part = |o: &OrbitSpec| match o {
                OrbitSpec::Diagram(d) => d.partition(),
                OrbitSpec::Partition(p) => p.clone(),
            };
            let (x, y) = (part(&a), part(&b));
            if x.size() != y.size() {
                return Err(CliError::Input("orbits live in different dimensions".into()));
            }
            (x.dominated_by(&y), y.dominated_by(&x))
        }
    };
    Ok(Outcome {
        text: format!("LEQ: {leq}\n"),
        json: json!({"lhs": label(&a), "rhs": label(&b), "leq": leq, "geq": geq}),
        ok: leq,
    })
}

fn hasse_cmd(g: &GroupArgs) -> Res<Outcome> {
    let k = group_kind(g)?;
    let orbits = enumerate(k)?;
    let leq = |x: &OrbitLabel, y: &OrbitLabel| match (x, y) {
        (OrbitLabel::Real(a), OrbitLabel::Real(b)) => dokovic_leq(a, b),
        (OrbitLabel::Complex(a), OrbitLabel::Complex(b)) => a.partition.dominated_by(&b.partition),
        _ => false,
    };
    let edges = hasse(&orbits, leq);
    let labels: Vec<String> = orbits.iter().map(|o| o.to_string()).collect();
    let dot = to_dot(&group_name(k), &labels, &edges);
    Ok(Outcome { text: dot.clone(), json: json!({"group": group_name(k), "labels": labels, "edges": edges, "dot": dot}), ok: true })
}

fn filtration_text(w: &Filtration<Rational>, names: &[String], sym: &str) -> String {
    let mut s = String::new();
    for k in w.lowest()..=w.highest() {
        let basis: Vec<String> = w.get(k).basis().iter().map(|v| render::vector(v, names)).collect();
        let _ = writeln!(s, "  {sym}_{k} (dim {}): {}", w.get(k).dim(), basis.join(", "));
    }
    s
}

fn filtration_json(w: &Filtration<Rational>) -> Value {
    let gr: serde_json::Map<String, Value> = w.graded_dims().into_iter().map(|(k, d)| (k.to_string(), json!(d))).collect();
    json!({"steps": filtration_to_json(w), "graded_dims": gr})
}

fn wfilt(p: &Pick, center: Option<i64>) -> Res<Outcome> {
    let fx = load(&p.input)?;
    let n = pick_n(&fx, p.index)?;
    let c = center.unwrap_or(fx.weight);
    let w = monodromy_filtration(&n, c)?;
    let text = format!("W(N) centered at {c}:\n{}", filtration_text(&w, &fx.basis, "W"));
    Ok(Outcome { text, json: json!({"center": c, "w": filtration_json(&w)}), ok: true })
}

fn relwfilt(p: &Pick) -> Res<Outcome> {
    let fx = load(&p.input)?;
    let n = pick_n(&fx, p.index)?;
    match relative_monodromy_filtration(&n, &fx.w)? {
        Some(m) => {
            let check = check_relative_monodromy(&n, &fx.w, &m);
            let ok = check.is_ok();
            let text = format!("M(N, W):\n{}verified: {ok}\n", filtration_text(&m, &fx.basis, "M"));
            Ok(Outcome { text, json: json!({"exists": true, "m": filtration_json(&m), "verified": ok}), ok })
        }
        None => Ok(Outcome { text: "M(N, W): does not exist\n".into(), json: json!({"exists": false}), ok: false }),
    }
}

fn eigen_table(h: &QMat, names: &[String]) -> Res<(String, Value)> {
    let g = Grading::from_matrix(h)?;
    let mut text = String::new();
    let mut js = serde_json::Map::new();
    for (k, s) in g.spaces().iter().rev() {
        let vs: Vec<String> = s.basis().iter().map(|v| render::vector(v, names)).collect();
        let _ = writeln!(text, "    {k}: {}", vs.join(", "));
        js.insert(k.to_string(), subspace_to_json(s));
    }
    Ok((text, Value::Object(js)))
}

fn deligne_chain(input: &str) -> Res<Outcome> {
    let fx = load(input)?;
    let c = build_chain(&fx.system())?;
    let check = c.check();
    let mut text = String::new();
    let mut pairs = Vec::new();
    for j in 0..c.rank() {
        let (t, tj) = eigen_table(&c.hs[j], &fx.basis)?;
        let _ = writeln!(text, "H_{} eigenspaces:\n{t}  N^_{} = {}", j + 1, j + 1, render::operator(&c.n_hats[j], &fx.basis));
        pairs.push(json!({"n_hat": mat_to_json(&c.n_hats[j]), "h": mat_to_json(&c.hs[j]), "h_eigenspaces": tj}));
    }
    let _ = writeln!(text, "chain verified: {}", check.is_ok());
    let js = json!({
        "gradings": c.gradings.iter().map(mat_to_json).collect::<Vec<_>>(),
        "filtrations": c.filtrations.iter().map(filtration_to_json).collect::<Vec<_>>(),
        "pairs": pairs,
        "verified": check.is_ok(),
    });
    Ok(Outcome { text, json: js, ok: check.is_ok() })
}

fn deform(input: &str, slot: Option<usize>, isometry: bool, commute: &[usize], morphism: bool) -> Res<Outcome> {
    let fx = load(input)?;
    let c = build_chain(&fx.system())?;
    let r = c.rank();
    let j = slot.unwrap_or(r);
    if j == 0 || j > r {
        return Err(CliError::Input(format!("slot {j} out of range 1..={r}")));
    }
    let mut cons = DeformationConstraints::default();
    if isometry {
        cons.isometry_of = Some(need_q(&fx)?.clone());
    }
    for &i in commute {
        cons.commute_with.push(pick_n(&fx, Some(i))?);
    }
    if morphism {
        cons.morphism_of = Some(deligne_bigrading(&fx.f, &c.filtrations[r])?);
    }
    let sp = deformation_space(&c, j, &cons)?;
    let mut text = format!("deformations at slot {j}: dimension {}\n", sp.len());
    for (i, m) in sp.iter().enumerate() {
        let _ = writeln!(text, "  eta_{}: {}", i + 1, render::operator(m, &fx.basis));
    }
    Ok(Outcome { text, json: json!({"slot": j, "dim": sp.len(), "basis": sp.iter().map(mat_to_json).collect::<Vec<_>>()}), ok: true })
}

fn assemble(input: &str, last_n: Option<&str>) -> Res<Outcome> {
    let fx = load(input)?;
    let s = fx.system();
    let r = s.rank();
    if r < 2 {
        return Err(CliError::Input("assembly needs at least two nilpotents".into()));
    }
    let c = build_chain(&s)?;
    let n = match last_n {
        Some(path) => mat_from_json(&read_value(path)?)?,
        None => s.ns[r - 1].clone(),
    };
    let last = DeligneSystem1 { w: c.filtrations[r - 1].clone(), n, y: s.yr.clone() };
    let asm = assemble_r(&s.prefix(&c, r - 1), &last);
    let mut js = report_json(&asm.report);
    if let Some(sys) = &asm.system {
        js["ns"] = json!(sys.ns.iter().map(mat_to_json).collect::<Vec<_>>());
    }
    Ok(Outcome { text: report_text("assembly", &asm.report), json: js, ok: asm.report.passed() && asm.system.is_some() })
}

fn phi(input: &str, a: &str) -> Res<Outcome> {
    let fx = load(input)?;
    let a: Rational = Rational::parse_exact(a)?;
    let ns = kato_phi(&a, &fx.ns)?;
    let mut text = format!("phi^{}:\n", a.to_exact());
    for (j, n) in ns.iter().enumerate() {
        let _ = writeln!(text, "  N_{} -> {}", j + 1, render::operator(n, &fx.basis));
    }
    Ok(Outcome { text, json: json!({"a": a.to_exact(), "ns": ns.iter().map(mat_to_json).collect::<Vec<_>>()}), ok: true })
}

fn dh_system(fx: &Fixture) -> Res<DeligneHodgeSystem> {
    Ok(DeligneHodgeSystem::new(fx.w.clone(), fx.ns.clone(), fx.f.clone())?.with_names(fx.basis.clone()))
}

fn dh_check(input: &str) -> Res<Outcome> {
    let fx = load(input)?;
    let rep = check_dh(&dh_system(&fx)?);
    Ok(Outcome { text: report_text("Deligne-Hodge axioms", &rep), json: report_json(&rep), ok: rep.passed() })
}

fn imhm_check(input: &str) -> Res<Outcome> {
    let fx = load(input)?;
    let q = need_q(&fx)?.clone();
    if !fx.w.is_pure() {
        return Err(CliError::Input("imhm-check reads pure systems with a single form".into()));
    }
    let rep = check_imhm(&ImhmData::pure(fx.w.lowest(), q, fx.f.clone(), fx.ns.clone()))?;
    Ok(Outcome { text: report_text("IMHM axioms", &rep), json: report_json(&rep), ok: rep.passed() })
}

fn polarize(input: &str, k: Option<i64>) -> Res<Outcome> {
    let fx = load(input)?;
    let cert = polarization_feasibility(&dh_system(&fx)?, k.unwrap_or(fx.weight))?;
    Ok(Outcome { text: format!("polarization: {}\n", cert.summary()), json: cert.to_json(), ok: cert.is_feasible() })
}

fn chromosome_cmd(p: &Pick) -> Res<Outcome> {
    let fx = load(&p.input)?;
    let n = pick_n(&fx, p.index)?;
    let d = diamond_of(&fx.f, &n, fx.weight)?;
    let chrom = chromosome(&d)?;
    let mut text = format!("chromosome: {chrom}\n");
    let mut js = json!({"diamond": d.to_json(), "chromosome": chrom.to_string()});
    let mut ok = true;
    if let Some(q) = &fx.q {
        let direct = signed_diagram_of(&n, q, fx.weight)?;
        ok = direct == chrom;
        let _ = writeln!(text, "form diagram: {direct}\nagree: {ok}");
        js["form_diagram"] = json!(direct.to_string());
        js["agree"] = json!(ok);
    }
    Ok(Outcome { text, json: js, ok })
}

fn weight2_model(a: usize, b: usize, c: usize, d: usize) -> Res<Outcome> {
    let m = build_model(a, b, c, d)?;
    let fr = m.frame()?;
    let yr = fr
        .bigrading
        .real_weight_grading()
        .ok_or_else(|| CliError::Lib(Error::Precondition("limit is not split".into())))?;
    let mut extras = std::collections::BTreeMap::new();
    extras.insert("n0".to_string(), m.n0.clone());
    extras.insert("n1".to_string(), m.n1.clone());
    let fx = Fixture {
        name: format!("weight2-model-{a}-{b}-{c}-{d}"),
        basis: m.basis.clone(),
        weight: 2,
        w: Filtration::pure(m.dim(), 2),
        ns: vec![m.n.clone()],
        yr,
        f: m.f.clone(),
        q: Some(m.q.clone()),
        extras,
    };
    let diagram = signed_diagram_of(&m.n, &m.q, 2)?;
    let pairing = m.check_pairings();
    let mut text = format!(
        "model (a,b,c,d) = ({a},{b},{c},{d}): dim {}, h^(2,0) = {}, h^(1,1) = {}\ndiagram: {diagram}\npairings: {}\n",
        m.dim(),
        m.dims.h20(),
        m.dims.h11(),
        verdict(pairing.passed())
    );
    if m.dims.h20() == 2 {
        if let Ok(t) = classify_h2x2_type(&m.n, &m.q) {
            let _ = writeln!(text, "type: {t}");
        }
    }
    Ok(Outcome { text, json: fx.to_json(), ok: pairing.passed() })
}

fn positive_weights(v: &Value) -> Res<Vec<Rational>> {
    Ok(vec_from_json(v)?)
}

fn cone_check_cmd(model: &[usize], cone: &str, random: usize, seed: u64) -> Res<Outcome> {
    let [a, b, c, d] = model else {
        return Err(CliError::Input("--model takes a,b,c,d".into()));
    };
    let m = build_model(*a, *b, *c, *d)?;
    let v = read_value(cone)?;
    let gens = v
        .get("generators")
        .and_then(|g| g.as_array())
        .ok_or_else(|| CliError::Input("cone file needs `generators`".into()))?;
    let mut generators = Vec::new();
    for g in gens {
        let x = match g.get("x") {
            Some(x) if x.as_array().is_some_and(|r| !r.is_empty()) => mat_from_json(x)?,
            _ => QMat::zeros(*c, *c),
        };
        let y = match g.get("y") {
            Some(y) if y.as_array().is_some_and(|r| !r.is_empty()) => mat_from_json(y)?,
            _ => QMat::zeros(a + b, *a),
        };
        generators.push((x, y));
    }
    let mut probes = Vec::new();
    if let Some(ps) = v.get("probes").and_then(|p| p.as_array()) {
        for p in ps {
            probes.push(positive_weights(p)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        probes.push((0..generators.len()).map(|_| Rational::new(rng.gen_range(1..=20).into(), rng.gen_range(1..=7).into())).collect());
    }
    let rep = cone_check(&m, &ConeSpec { generators }, &probes)?;
    let mut text = format!(
        "cone of dimension {} (max {}), type {}, diagram {}: {} ({})\n",
        rep.dim,
        match rep.max_dim {
            nilorbit::weight2::MaxConeDim::Exact(n) => n.to_string(),
            nilorbit::weight2::MaxConeDim::Unresolved => "unresolved".into(),
        },
        rep.cone_type.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
        rep.diagram,
        verdict(rep.passed()),
        rep.status
    );
    for f in &rep.faces {
        let t = f.h2_type.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(text, "  face {:?}: dim {}, type {t}, diagram {}", f.generators, f.dim, f.diagram);
    }
    for c in rep.report.failures() {
        let _ = writeln!(text, "  failed {}: {}", c.name, c.detail);
    }
    Ok(Outcome { text, json: rep.to_json(), ok: rep.passed() })
}

fn root_sl2(m: usize, subset: &[usize], cone: bool, table: bool) -> Res<Outcome> {
    let signs = root_signs(m)?;
    let sl = build_root_sl2s_with_signs(m, subset, signs)?;
    let mut ok = sl.pairwise_commute();
    let mut text = format!(
        "roots {:?} with signs {:?} in so(4,{}): commute {}, type {}\n",
        subset,
        sl.sl2s.iter().map(|r| r.sign).collect::<Vec<_>>(),
        m - 4,
        sl.pairwise_commute(),
        sl.h2_type
    );
    let mut js = sl.to_json();
    if table {
        let mut rows = serde_json::Map::new();
        for mask in 1u32..16 {
            let sub: Vec<usize> = (1..=4).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            let t = build_root_sl2s_with_signs(m, &sub, signs)?.h2_type;
            let key = sub.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(text, "  {{{key}}}: {t}");
            rows.insert(key, json!(t.to_string()));
        }
        js["table"] = Value::Object(rows);
    }
    if cone {
        let rep = sl.cone_check()?;
        ok &= rep.passed();
        let _ = writeln!(text, "cone of dimension {}: {} ({})", rep.dim, verdict(rep.passed()), rep.status);
        js["cone"] = rep.to_json();
    }
    Ok(Outcome { text, json: js, ok })
}

fn counterexample() -> Res<Outcome> {
    let fx = unpolarizable_pair();
    let sys = dh_system(&fx)?;
    let rep = check_dh(&sys);
    let cert = polarization_feasibility(&sys, fx.weight)?;
    let ok = rep.passed() && !cert.is_feasible();
    let text = format!("DH2: {}; polarization: {}\n", verdict(rep.passed()), cert.summary());
    let js = json!({"system": fx.to_json(), "dh": report_json(&rep), "polarization": cert.to_json(), "reproduced": ok});
    Ok(Outcome { text, json: js, ok })
}
