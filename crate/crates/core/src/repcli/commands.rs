//! Commands over parsed representation files, producing ordered reports.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Subcommand;

use super::repfile::{parse, RepFile, Representation};
use crate::arith::{trace_root_of_unity_order, Fp, NfElem, Place, Ring, DEFAULT_PREC};
use crate::bttree::{act, ball_dot, Vertex};
use crate::error::{Error, Result};
use crate::hodgesign::{SesquiForm, embedding_signs, invariant_form_space, polydisk_dimension, sign_fixing_lambda, sign_lines};
use crate::integrality::integrality_scan;
use crate::matrix::{Matrix2, RepPresentation};
use crate::orbicurve::{
    classify_orbicurve, enumerate_candidate_types_with, hurwitz_index_bound, report_lines, EnumerationBounds,
    GeomClass, OrbicurveData,
};
use crate::rigidkit::{hypergeometric_build, verify_rigid_tuple, virtual_dimension, ClassSpec, HypergeometricOutcome};
use crate::sl2kit::{
    complete_and_test, conjugacy_class_kind, density_lines, is_quasi_unipotent, rep_boundedness, translation_length,
    zariski_density_check, Boundedness, ConjClassKind, QuasiUnipotence,
};
use crate::treeharm::{minimize, reeb_contract, TreeAssignment};

const DEFAULT_WORD_LEN: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Zariski density and the behaviour of puncture monodromy.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WORD_LEN)]
        max_word_len: usize,
    },
    /// Translation lengths and boundedness on the Bruhat-Tits tree.
    Tree {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: u64,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Expand a rational-function representation at a place and test it.
    Complete {
        file: PathBuf,
        #[arg(long, default_value = "inf")]
        place: String,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: i64,
        #[arg(long, default_value_t = DEFAULT_WORD_LEN)]
        max_word_len: usize,
    },
    /// Scan word traces for algebraic integrality.
    Integrality {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_word_len: usize,
    },
    /// Class data, virtual dimension and rigidity of a monodromy tuple.
    Rigidity { file: PathBuf },
    /// Build a rank-two tuple with prescribed local classes.
    Hypergeom {
        #[arg(long)]
        classes: String,
    },
    /// Index bounds and candidate orbicurve targets for a source of genus g with b punctures.
    Orbibounds {
        genus: u32,
        punctures: u32,
        #[arg(long)]
        max_index: Option<u64>,
        #[arg(long)]
        max_points: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Minimize the energy of an assignment of a gain graph into the tree.
    Harmonic {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        sweeps: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Invariant sesquilinear forms and their signs at the complex embeddings.
    Hodge {
        file: PathBuf,
        /// Target signs at the real embeddings, e.g. "+,-".
        #[arg(long)]
        signs: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_height: i64,
    },
}

impl Command {
    pub fn file(&self) -> Option<&PathBuf> {
        match self {
            Command::Analyze { file, .. }
            | Command::Tree { file, .. }
            | Command::Complete { file, .. }
            | Command::Integrality { file, .. }
            | Command::Rigidity { file }
            | Command::Harmonic { file, .. }
            | Command::Hodge { file, .. } => Some(file),
            Command::Hypergeom { .. } | Command::Orbibounds { .. } => None,
        }
    }

    fn dot_path(&self) -> Option<&PathBuf> {
        match self {
            Command::Tree { dot, .. } | Command::Harmonic { dot, .. } => dot.as_ref(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<(String, String)>,
    pub inconclusive: bool,
    pub embedded: Option<RepFile>,
    pub dot: Option<(PathBuf, String)>,
}

impl Report {
    fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    fn extend(&mut self, lines: Vec<(String, String)>) {
        self.lines.extend(lines);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn exit_code(&self) -> i32 {
        if self.inconclusive {
            3
        } else {
            0
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(s, "{k}: {v}");
        }
        if let Some(f) = &self.embedded {
            s.push_str("repfile: begin\n");
            s.push_str(&f.serialize());
            s.push_str("repfile: end\n");
        }
        let _ = writeln!(s, "status: {}", if self.inconclusive { "inconclusive" } else { "ok" });
        s
    }
}

/// 1 for malformed input, 3 for exhausted budgets and precision, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::UnknownGenerator(_) => 1,
        Error::SearchBudgetExceeded(_) | Error::SweepBudgetExceeded(_) => 3,
        e if e.is_precision() => 3,
        _ => 2,
    }
}

/// Reads the command's input file and runs it.
pub fn run(cmd: &Command) -> Result<Report> {
    let text = match cmd.file() {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    run_text(cmd, text.as_deref())
}

/// Runs a command on file contents already in memory; the command's path is
/// only used for DOT output.
pub fn run_text(cmd: &Command, text: Option<&str>) -> Result<Report> {
    let file = match (cmd.file(), text) {
        (Some(_), Some(t)) => Some(parse(t)?),
        (Some(_), None) => return Err(Error::Invalid("missing input".into())),
        _ => None,
    };
    let mut r = Report::default();
    match (cmd, file) {
        (Command::Analyze { max_word_len, .. }, Some(f)) => analyze(&f, *max_word_len, &mut r)?,
        (Command::Tree { radius, .. }, Some(f)) => tree(&f, *radius, cmd.dot_path(), &mut r)?,
        (Command::Complete { place, prec, max_word_len, .. }, Some(f)) => {
            complete(&f, place, *prec, *max_word_len, &mut r)?
        }
        (Command::Integrality { max_word_len, .. }, Some(f)) => {
            let rep = number_rep(&f, "integrality")?;
            r.push("mode", f.rep.mode());
            r.extend(integrality_scan(rep, *max_word_len).lines());
        }
        (Command::Rigidity { .. }, Some(f)) => rigidity(&f, &mut r)?,
        (Command::Hypergeom { classes }, None) => hypergeom(classes, &mut r)?,
        (Command::Orbibounds { genus, punctures, max_index, max_points, budget }, None) => {
            let bounds = EnumerationBounds { max_index: *max_index, max_points: *max_points, budget: *budget };
            orbibounds(*genus, *punctures, bounds, &mut r)?
        }
        (Command::Harmonic { sweeps, .. }, Some(f)) => harmonic(&f, *sweeps, cmd.dot_path(), &mut r)?,
        (Command::Hodge { signs, max_height, .. }, Some(f)) => hodge(&f, signs.as_deref(), *max_height, &mut r)?,
        _ => unreachable!("file presence matches the command"),
    }
    Ok(r)
}

fn mismatch(cmd: &str, wanted: &str, f: &RepFile) -> Error {
    Error::ModeMismatch(format!("{cmd} needs a {wanted} field, file declares {}", f.rep.mode()))
}

fn number_rep<'a>(f: &'a RepFile, cmd: &str) -> Result<&'a RepPresentation<NfElem>> {
    match &f.rep {
        Representation::Number { rep, .. } | Representation::Cm { rep, .. } => Ok(rep),
        _ => Err(mismatch(cmd, "number", f)),
    }
}

fn class_lines<R: Ring>(rep: &RepPresentation<R>, r: &mut Report) {
    for (name, m) in rep.generators() {
        r.push(format!("class_{name}"), conjugacy_class_kind(m));
    }
}

fn analyze(f: &RepFile, max_word_len: usize, r: &mut Report) -> Result<()> {
    fn generic<R: Ring>(rep: &RepPresentation<R>, max_word_len: usize, r: &mut Report) -> Result<()> {
        class_lines(rep, r);
        let d = zariski_density_check(rep, max_word_len);
        r.inconclusive |= !d.is_dense();
        r.push("max_word_len", max_word_len);
        r.extend(density_lines(&d));
        for w in &rep.punctures {
            let tr = rep.trace_of_word(w)?;
            let verdict = match tr.trace_has_infinite_order() {
                Some(true) => "no".to_string(),
                Some(false) => "yes".to_string(),
                None => {
                    r.inconclusive = true;
                    "inconclusive".to_string()
                }
            };
            r.push(format!("puncture_{w}_trace"), &tr);
            r.push(format!("puncture_{w}_quasi_unipotent"), verdict);
        }
        Ok(())
    }
    r.push("mode", f.rep.mode());
    match &f.rep {
        Representation::Laurent { prec, rep } => {
            r.push("prec", prec);
            generic(rep, max_word_len, r)
        }
        Representation::RatFunc { rep, .. } => generic(rep, max_word_len, r),
        Representation::Number { rep, .. } | Representation::Cm { rep, .. } => {
            generic(rep, max_word_len, r)?;
            for w in &rep.punctures {
                if let QuasiUnipotence::Yes { order, unipotent } = is_quasi_unipotent(&rep.eval(w)?) {
                    let kind = if unipotent { "unipotent" } else { "semisimple" };
                    r.push(format!("puncture_{w}_eigenvalue_order"), format!("{order} {kind}"));
                }
            }
            Ok(())
        }
    }
}

fn tree(f: &RepFile, radius: u64, dot: Option<&PathBuf>, r: &mut Report) -> Result<()> {
    let Representation::Laurent { prec, rep } = &f.rep else {
        return Err(mismatch("tree", "laurent", f));
    };
    r.push("mode", "laurent");
    r.push("prec", prec);
    for (name, m) in rep.generators() {
        r.push(format!("translation_length_{name}"), translation_length(m)?);
    }
    let (b, witness) = rep_boundedness(rep)?;
    let center = match &b {
        Boundedness::Bounded { fixed } => {
            let verified = rep.generator_matrices().iter().try_fold(true, |ok, g| Ok::<_, Error>(ok && act(g, fixed)? == *fixed))?;
            r.push("bounded", "yes");
            r.push("fixed_vertex", fixed);
            r.push("fixed_vertex_verified", if verified { "yes" } else { "no" });
            fixed.clone()
        }
        Boundedness::Unbounded { translation_length, .. } => {
            r.push("bounded", "no");
            r.push("hyperbolic_word", witness.expect("unbounded verdicts name a word"));
            r.push("hyperbolic_translation_length", translation_length);
            Vertex::base(rep.generators()[0].1.a.modulus())
        }
    };
    if let Some(path) = dot {
        r.push("dot", path.display());
        r.push("dot_radius", radius);
        r.dot = Some((path.clone(), ball_dot(&center, radius)));
    }
    Ok(())
}

fn parse_place(s: &str, p: u32) -> Result<Place> {
    if s == "inf" {
        return Ok(Place::Infinity);
    }
    let c: i64 = s.trim().parse().map_err(|_| Error::Invalid(format!("place '{s}' is neither 'inf' nor an integer")))?;
    Ok(Place::Finite(Fp::new(p, c)?))
}

fn complete(f: &RepFile, place: &str, prec: i64, max_word_len: usize, r: &mut Report) -> Result<()> {
    let Representation::RatFunc { rep, .. } = &f.rep else {
        return Err(mismatch("complete", "ratfunc", f));
    };
    let p = rep.generators()[0].1.a.modulus();
    let place = parse_place(place, p)?;
    let report = complete_and_test(rep, place, prec, max_word_len)?;
    r.push("mode", "ratfunc");
    r.push("max_word_len", max_word_len);
    r.extend(report.lines());
    r.inconclusive |= !report.density.is_dense();
    let mut completed = report.completed.clone();
    completed.relators.clear();
    r.embedded = Some(RepFile::new(Representation::Laurent { prec, rep: completed }));
    Ok(())
}

/// Order of a class in PSL(2), `None` for classes of infinite order.
fn projective_order(m: &Matrix2<NfElem>, kind: &ConjClassKind<NfElem>) -> Option<u64> {
    match kind {
        ConjClassKind::Identity | ConjClassKind::MinusIdentity => Some(1),
        ConjClassKind::UnipotentPlus | ConjClassKind::UnipotentMinus => None,
        ConjClassKind::Semisimple(_) => {
            let order = trace_root_of_unity_order(&m.trace())?;
            Some(if order % 2 == 0 { order / 2 } else { order })
        }
    }
}

fn rigidity(f: &RepFile, r: &mut Report) -> Result<()> {
    let rep = number_rep(f, "rigidity")?;
    let mut kinds = Vec::new();
    let mut punctures = 0u32;
    let mut indices = Vec::new();
    for (_, m) in rep.generators() {
        let kind = conjugacy_class_kind(m);
        match projective_order(m, &kind) {
            None => punctures += 1,
            Some(1) => {}
            Some(n) => indices.push(n),
        }
        kinds.push(kind);
    }
    let target = OrbicurveData::new(0, punctures, indices)?;
    let geometry = classify_orbicurve(&target);
    if geometry != GeomClass::Hyperbolic {
        return Err(Error::Invalid(format!(
            "target orbicurve {target} is {geometry}; rigidity analysis needs a hyperbolic target"
        )));
    }
    r.push("mode", f.rep.mode());
    class_lines(rep, r);
    r.push("orbicurve", &target);
    r.push("orbicurve_class", geometry);
    r.push("euler_characteristic", target.euler_characteristic());
    let v = virtual_dimension(&kinds);
    r.push("virtual_dimension", v);
    let product = rep.generator_matrices().iter().skip(1).fold(rep.generator_matrices()[0].clone(), |acc, m| acc.mul(m));
    r.push("product_is_identity", if product.is_scalar(1) { "yes" } else { "no" });
    if let Ok(ms) = <[Matrix2<NfElem>; 3]>::try_from(rep.generator_matrices()) {
        let ok = verify_rigid_tuple(&ms, &kinds);
        r.push("rigid_tuple_verified", if ok { "yes" } else { "no" });
    }
    r.push("rigid", if v == 0 { "yes" } else { "no" });
    Ok(())
}

fn hypergeom(classes: &str, r: &mut Report) -> Result<()> {
    let specs: Vec<ClassSpec> = classes.split(',').map(str::parse).collect::<Result<_>>()?;
    let specs: [ClassSpec; 3] = specs
        .try_into()
        .map_err(|v: Vec<ClassSpec>| Error::Invalid(format!("expected three classes, got {}", v.len())))?;
    r.push("classes", specs.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    match hypergeometric_build(specs)? {
        HypergeometricOutcome::Obstructed(reason) => {
            r.push("hypergeometric", "obstructed");
            r.push("reason", reason);
        }
        HypergeometricOutcome::Tuple(t) => {
            r.push("hypergeometric", "tuple");
            for (name, k) in ['a', 'b', 'c'].iter().zip(&t.classes) {
                r.push(format!("class_{name}"), k);
            }
            r.push("twists", if t.twists.is_empty() { "none".to_string() } else { t.twists.join("; ") });
            let product = t.matrices[0].mul(&t.matrices[1]);
            r.push("product_ab", &product);
            r.push("rigid_tuple_verified", if verify_rigid_tuple(&t.matrices, &t.classes) { "yes" } else { "no" });
            let mut rep = t.representation();
            rep.relators = vec![crate::matrix::Word::parse("abc")?];
            r.embedded = Some(RepFile::new(Representation::Number { field: t.field.clone(), rep }));
        }
    }
    Ok(())
}

fn orbibounds(g: u32, b: u32, bounds: EnumerationBounds, r: &mut Report) -> Result<()> {
    let hb = hurwitz_index_bound(g, b)?;
    r.extend(report_lines(g, b, &hb));
    if let Some(n) = bounds.max_index {
        r.push("max_index_override", n);
    }
    if let Some(n) = bounds.max_points {
        r.push("max_points_override", n);
    }
    r.push("budget", bounds.budget);
    match enumerate_candidate_types_with(g, b, bounds) {
        Ok(types) => {
            r.push("candidate_types", types.len());
            for (k, t) in types.iter().enumerate() {
                r.push(format!("type_{k}"), t);
            }
        }
        Err(Error::SearchBudgetExceeded(msg)) => {
            r.push("candidate_types", "budget exceeded");
            r.push("budget_detail", msg);
            r.inconclusive = true;
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn harmonic(f: &RepFile, sweeps: usize, dot: Option<&PathBuf>, r: &mut Report) -> Result<()> {
    let Representation::Laurent { prec, rep } = &f.rep else {
        return Err(mismatch("harmonic", "laurent", f));
    };
    let g = f.gain_graph()?.ok_or_else(|| Error::Invalid("harmonic needs edge declarations".into()))?;
    let base = Vertex::base(rep.generators()[0].1.a.modulus());
    let run = minimize(&g, TreeAssignment::constant(&g, &base), sweeps)?;
    r.push("mode", "laurent");
    r.push("prec", prec);
    r.push("vertices", g.vertex_count());
    r.push("edges", g.edges().len());
    r.push("sweep_budget", sweeps);
    r.push("sweeps", run.sweeps);
    r.push("converged", if run.converged { "yes" } else { "no" });
    r.inconclusive |= !run.converged;
    r.push("initial_energy", run.energies[0]);
    r.push("final_energy", run.final_energy());
    for (name, v) in g.names().iter().zip(run.assignment.vertices()) {
        r.push(format!("vertex_{name}"), v);
    }
    let reeb = reeb_contract(&g, &run.assignment)?;
    r.push("reeb_nodes", reeb.nodes.len());
    r.push("reeb_edges", reeb.edges.len());
    r.push("reeb_first_betti_number", reeb.first_betti_number());
    r.push("reeb_point", if reeb.is_point() { "yes" } else { "no" });
    if let Some(path) = dot {
        r.push("dot", path.display());
        r.dot = Some((path.clone(), reeb.to_dot(g.names())));
    }
    Ok(())
}

fn parse_signs(s: &str) -> Result<Vec<bool>> {
    s.split(',')
        .map(|t| match t.trim() {
            "+" => Ok(true),
            "-" => Ok(false),
            other => Err(Error::Invalid(format!("sign '{other}' is neither + nor -"))),
        })
        .collect()
}

fn hodge(f: &RepFile, signs: Option<&str>, max_height: i64, r: &mut Report) -> Result<()> {
    let Representation::Cm { field, rep } = &f.rep else {
        return Err(mismatch("hodge", "cm", f));
    };
    r.push("mode", "cm");
    r.push("real_degree", field.real_degree());
    let forms = invariant_form_space(field, &rep.generator_matrices());
    r.push("invariant_forms", forms.len());
    let forms = match &f.form {
        Some(m) => {
            let declared = SesquiForm::new(field, m.clone())?;
            let invariant = rep.generator_matrices().iter().all(|g| declared.is_invariant_under(g));
            r.push("declared_form_invariant", if invariant { "yes" } else { "no" });
            vec![declared]
        }
        None => forms,
    };
    let lambda = match signs {
        Some(s) => {
            let targets = parse_signs(s)?;
            let lambda = sign_fixing_lambda(field.real_field(), &targets, max_height)?;
            r.push("max_height", max_height);
            r.push("lambda", &lambda);
            Some(lambda)
        }
        None => None,
    };
    for (k, form) in forms.iter().enumerate() {
        // a single form is reported without an index prefix
        let prefix = if forms.len() == 1 { String::new() } else { format!("form_{k}_") };
        r.push(format!("{prefix}form"), form.to_string_pretty());
        let entries = match embedding_signs(form) {
            Ok(entries) => entries,
            Err(Error::NumericallySingular(_)) => {
                r.push(format!("{prefix}signs"), "singular");
                continue;
            }
            Err(e) => return Err(e),
        };
        for (key, v) in sign_lines(&entries) {
            r.push(format!("{prefix}{key}"), v);
        }
        r.push(format!("{prefix}polydisk_dimension"), polydisk_dimension(form)?);
        if let Some(l) = &lambda {
            let scaled = form.scale(l);
            for (key, v) in sign_lines(&embedding_signs(&scaled)?) {
                r.push(format!("{prefix}scaled_{key}"), v);
            }
        }
    }
    Ok(())
}
