//! Replayable certificates. Every command is described by a [`Request`];
//! [`produce`] runs it and [`verify`] re-runs it, compares the result and
//! re-checks witnesses independently.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::StructureAlgebra;
use crate::cur::{build_split_extension, cur_algebra, verify_cur};
use crate::diffperm::{enumerate_sls_basis, Interpretation};
use crate::envelope::{embed, envelope_suite};
use crate::error::{Error, Result};
use crate::identity::{builtin, eval_in_free_perm, find_violation, multilinear_dim, VarietyPresentation};
use crate::linalg::SparseVec;
use crate::replicate::replicate_variety;
use crate::scalar::Scalar;
use crate::speciality::{
    check_intersection, check_j_closure, check_nice, check_novikov_quotient, check_poisson, compute_ideals,
    decide_special, Intersection, MuMap, NiceWitness, NicenessReport, SampleCheck,
};
use crate::term::{parse_identities, Identity};

pub const FORMAT: &str = "lsym-certificate/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckIdentity,
    Dim,
    Replicate,
    SlsBasis,
    EnvelopeTest,
    Nice,
    Special,
    Ideals,
    Cur,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<String>,
}

/// Inputs travel inside the certificate so that it can be replayed alone.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Input {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub command: Command,
    pub options: Options,
    pub input: Input,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub command: Command,
    pub options: Options,
    pub input: Input,
    pub verdict: String,
    pub passed: bool,
    pub result: Body,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub holds: bool,
    /// Nonzero expansion or value at the violating tuple.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub relation: Vec<Term>,
    pub multiplier: String,
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mu {
    pub x: String,
    pub images: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Niceness {
    pub nice: bool,
    pub relations_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub square_basis: Vec<[String; 2]>,
    pub mu: Vec<Mu>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionBody {
    pub bound: usize,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Samples {
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlsFailure {
    pub identity: String,
    pub tuple: Vec<String>,
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    CheckIdentity {
        target: String,
        checks: Vec<IdentityCheck>,
    },
    Dim {
        variety: String,
        arity: usize,
        dim: usize,
    },
    Replicate {
        variety: String,
        identities: Vec<String>,
    },
    SlsBasis {
        arity: usize,
        count: usize,
        monomials: Vec<String>,
    },
    EnvelopeTest {
        bound: usize,
        pairs: usize,
        mprod_failures: Vec<String>,
        grade_failures: Vec<String>,
        triples: usize,
        identity_failures: Vec<String>,
    },
    Nice {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sls_violation: Option<SlsFailure>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        niceness: Option<Niceness>,
    },
    Special {
        special: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sls_violation: Option<SlsFailure>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        niceness: Option<Niceness>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        intersection: Option<IntersectionBody>,
    },
    Ideals {
        bound: usize,
        k_dims: Vec<u64>,
        k_dim: u64,
        i_dim: u64,
        w_dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        v_dim: Option<u64>,
        v_mod_i_dim: usize,
        j_dim: u64,
        v_cap_a: Vec<Vec<String>>,
        intersection: IntersectionBody,
        poisson: Samples,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        novikov_quotient: Option<Samples>,
        j_closure: Samples,
    },
    Cur {
        dim_n: usize,
        dim_n0: usize,
        dim_bar: usize,
        dim_hat: usize,
        dim_cur: usize,
        hat_identities: Vec<IdentityCheck>,
        cur_identities: Vec<IdentityCheck>,
        embedding_rank: usize,
        vdash_preserved: bool,
        dashv_preserved: bool,
        not_constructed: String,
    },
}

pub const DEFAULT_BOUND: usize = 4;
pub const DEFAULT_SAMPLES: usize = 100;

fn dense(v: &SparseVec, n: usize) -> Vec<String> {
    (0..n).map(|i| v.coeff(&i).to_string()).collect()
}

fn undense(v: &[String], n: usize) -> Result<SparseVec> {
    if v.len() != n {
        return Err(Error::BasisMismatch(v.len(), n));
    }
    let mut out = SparseVec::zero();
    for (i, c) in v.iter().enumerate() {
        out.add_term(i, c.parse::<Scalar>()?);
    }
    Ok(out)
}

fn index(a: &StructureAlgebra, name: &str) -> Result<usize> {
    a.basis
        .iter()
        .position(|b| b == name)
        .ok_or_else(|| Error::Algebra(format!("unknown basis element `{name}`")))
}

impl Request {
    pub fn new(command: Command) -> Self {
        Request { command, options: Options::default(), input: Input::default() }
    }

    pub fn algebra(&self) -> Result<StructureAlgebra> {
        let v = self.input.algebra.as_ref().ok_or_else(|| Error::Algebra("an algebra file is required".into()))?;
        StructureAlgebra::from_value(v)
    }

    pub fn presentation(&self) -> Result<VarietyPresentation> {
        match (&self.input.variety, &self.input.identities) {
            (Some(name), None) => builtin(name),
            (None, Some(text)) => VarietyPresentation::from_identities("file", parse_identities(text)?),
            _ => Err(Error::Algebra("give exactly one of a variety name or an identity file".into())),
        }
    }

    fn presentation_name(&self) -> String {
        self.input.variety.clone().unwrap_or_else(|| "file".into())
    }

    fn bound(&self) -> usize {
        self.options.bound.unwrap_or(DEFAULT_BOUND)
    }

    fn seed(&self) -> u64 {
        self.options.seed.unwrap_or(0)
    }

    fn samples(&self) -> usize {
        self.options.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    fn arity(&self) -> Result<usize> {
        match self.options.arity {
            Some(n) if n >= 1 => Ok(n),
            _ => Err(Error::Algebra("a positive arity is required".into())),
        }
    }
}

pub fn algebra_value(a: &StructureAlgebra) -> Value {
    serde_json::from_str(&a.to_text()).expect("algebra text is JSON")
}

fn sls_failure(a: &StructureAlgebra, id: &Identity, tuple: &[usize], value: &SparseVec) -> SlsFailure {
    SlsFailure {
        identity: id.to_string(),
        tuple: tuple.iter().map(|&i| a.basis[i].clone()).collect(),
        value: dense(value, a.dim()),
    }
}

fn niceness_body(a: &StructureAlgebra, r: &NicenessReport) -> Niceness {
    let n = a.dim();
    let name = |i: usize| a.basis[i].clone();
    Niceness {
        nice: r.nice,
        relations_dim: r.relations_dim,
        witness: r.witness.as_ref().map(|w| Witness {
            relation: w
                .relation
                .iter()
                .map(|(i, j, c)| Term { left: name(*i), right: name(*j), coeff: c.to_string() })
                .collect(),
            multiplier: name(w.multiplier),
            value: dense(&w.value, n),
        }),
        square_basis: r.square_basis.iter().map(|&(i, j)| [name(i), name(j)]).collect(),
        mu: r.mu.iter().map(|m| Mu { x: name(m.x), images: m.images.iter().map(|v| dense(v, n)).collect() }).collect(),
    }
}

/// Rebuilds the report from its certificate form.
fn niceness_report(a: &StructureAlgebra, b: &Niceness) -> Result<NicenessReport> {
    let n = a.dim();
    let witness = match &b.witness {
        None => None,
        Some(w) => Some(NiceWitness {
            relation: w
                .relation
                .iter()
                .map(|t| Ok((index(a, &t.left)?, index(a, &t.right)?, t.coeff.parse()?)))
                .collect::<Result<_>>()?,
            multiplier: index(a, &w.multiplier)?,
            value: undense(&w.value, n)?,
        }),
    };
    Ok(NicenessReport {
        nice: b.nice,
        relations_dim: b.relations_dim,
        witness,
        square_basis: b
            .square_basis
            .iter()
            .map(|[i, j]| Ok((index(a, i)?, index(a, j)?)))
            .collect::<Result<_>>()?,
        mu: b
            .mu
            .iter()
            .map(|m| {
                Ok(MuMap { x: index(a, &m.x)?, images: m.images.iter().map(|v| undense(v, n)).collect::<Result<_>>()? })
            })
            .collect::<Result<_>>()?,
    })
}

fn intersection_body(a: &StructureAlgebra, x: &Intersection) -> IntersectionBody {
    IntersectionBody { bound: x.bound, dim: x.dim, basis: x.basis.iter().map(|v| dense(v, a.dim())).collect() }
}

fn samples(s: &SampleCheck) -> Samples {
    Samples { checked: s.checked, failures: s.failures.clone() }
}

fn presentation_checks(v: &VarietyPresentation, a: &StructureAlgebra) -> Result<Vec<IdentityCheck>> {
    v.identities
        .iter()
        .map(|id| {
            let viol = find_violation(id, a)?;
            Ok(IdentityCheck {
                identity: id.to_string(),
                holds: viol.is_none(),
                value: viol.as_ref().map(|v| a.format_vector(&v.value)),
                tuple: viol.map(|v| v.tuple.iter().map(|&i| a.basis[i].clone()).collect()),
            })
        })
        .collect()
}

fn interpretation(name: Option<&str>, di: bool) -> Result<Interpretation> {
    Ok(match name {
        None if di => Interpretation::Dialgebra,
        None | Some("derived") => Interpretation::Derived,
        Some("dialgebra") => Interpretation::Dialgebra,
        Some("plain") => Interpretation::Plain,
        Some("plain-di") => Interpretation::PlainDi,
        Some(other) => return Err(Error::Algebra(format!("unknown interpretation `{other}`"))),
    })
}

fn finish(req: &Request, verdict: String, passed: bool, result: Body) -> Certificate {
    Certificate {
        format: FORMAT.into(),
        command: req.command,
        options: req.options.clone(),
        input: req.input.clone(),
        verdict,
        passed,
        result,
    }
}

/// Runs a request and packages the outcome.
pub fn produce(req: &Request) -> Result<Certificate> {
    match req.command {
        Command::CheckIdentity => {
            let text = req.input.identities.as_ref().ok_or_else(|| Error::Algebra("an identity file is required".into()))?;
            let ids = parse_identities(text)?;
            let (target, checks) = match &req.input.algebra {
                Some(_) => {
                    let a = req.algebra()?;
                    ("algebra".to_string(), presentation_checks(&VarietyPresentation::from_identities("file", ids)?, &a)?)
                }
                None => {
                    let di = ids.iter().any(Identity::is_di);
                    let interp = interpretation(req.options.interpretation.as_deref(), di)?;
                    let checks = ids
                        .iter()
                        .map(|id| {
                            let p = eval_in_free_perm(id, interp)?;
                            Ok(IdentityCheck {
                                identity: id.to_string(),
                                holds: p.is_zero(),
                                value: (!p.is_zero()).then(|| p.to_string()),
                                tuple: None,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let reading = match interp {
                        Interpretation::Derived => "x∘y = x·d(y)",
                        Interpretation::Dialgebra => "x⊢y = x·d(y), x⊣y = d(y)·x",
                        Interpretation::Plain => "x∘y = x·y",
                        Interpretation::PlainDi => "x⊢y = x·y, x⊣y = y·x",
                    };
                    (format!("the free differential Perm-algebra with {reading}"), checks)
                }
            };
            let ok = checks.iter().all(|c| c.holds);
            let verdict = if ok { "all identities hold" } else { "some identities fail" };
            Ok(finish(req, verdict.into(), ok, Body::CheckIdentity { target, checks }))
        }
        Command::Dim => {
            let n = req.arity()?;
            let dim = multilinear_dim(&req.presentation()?, n)?;
            let body = Body::Dim { variety: req.presentation_name(), arity: n, dim };
            Ok(finish(req, dim.to_string(), true, body))
        }
        Command::Replicate => {
            let di = replicate_variety(&req.presentation()?)?;
            let identities: Vec<String> = di.identities.iter().map(|id| id.to_string()).collect();
            let verdict = format!("{} identities", identities.len());
            Ok(finish(req, verdict, true, Body::Replicate { variety: req.presentation_name(), identities }))
        }
        Command::SlsBasis => {
            let n = req.arity()?;
            let monomials: Vec<String> = enumerate_sls_basis(n, true).iter().map(|m| m.to_string()).collect();
            let count = monomials.len();
            Ok(finish(req, count.to_string(), true, Body::SlsBasis { arity: n, count, monomials }))
        }
        Command::EnvelopeTest => {
            let a = req.algebra()?;
            let s = envelope_suite(&a, req.bound(), req.samples(), req.seed())?;
            let ok = s.passed();
            let verdict = if ok { "envelope suite holds" } else { "envelope suite fails" };
            let body = Body::EnvelopeTest {
                bound: s.bound,
                pairs: s.pairs,
                mprod_failures: s.mprod_failures,
                grade_failures: s.grade_failures,
                triples: s.triples,
                identity_failures: s.identity_failures,
            };
            Ok(finish(req, verdict.into(), ok, body))
        }
        Command::Nice => {
            let a = req.algebra()?;
            if let Some((id, v)) = crate::speciality::sls_violation(&a)? {
                let body = Body::Nice { sls_violation: Some(sls_failure(&a, &id, &v.tuple, &v.value)), niceness: None };
                return Ok(finish(req, "not an SLS-algebra".into(), false, body));
            }
            let r = check_nice(&a)?;
            let ok = r.verify(&a).is_ok();
            let verdict = if r.nice { "nice" } else { "not nice" };
            Ok(finish(req, verdict.into(), ok, Body::Nice { sls_violation: None, niceness: Some(niceness_body(&a, &r)) }))
        }
        Command::Special => {
            let a = req.algebra()?;
            let v = decide_special(&a, req.options.bound)?;
            let ok = v.niceness.as_ref().is_none_or(|r| r.verify(&a).is_ok());
            let verdict = if v.special { "special" } else { "not special" };
            let body = Body::Special {
                special: v.special,
                sls_violation: v.sls_violation.as_ref().map(|(id, x)| sls_failure(&a, id, &x.tuple, &x.value)),
                niceness: v.niceness.as_ref().map(|r| niceness_body(&a, r)),
                intersection: v.intersection.as_ref().map(|x| intersection_body(&a, x)),
            };
            Ok(finish(req, verdict.into(), ok, body))
        }
        Command::Ideals => {
            let a = req.algebra()?;
            let span = compute_ideals(&a, req.bound())?;
            let x = check_intersection(&span);
            let (k, seed) = (req.samples(), req.seed());
            let poisson = check_poisson(&span, k, seed)?;
            let nq = if span.bound() >= 3 { Some(check_novikov_quotient(&span, k, seed)?) } else { None };
            let closure = check_j_closure(&span, k, seed)?;
            let ok = poisson.holds() && closure.holds() && nq.as_ref().is_none_or(SampleCheck::holds);
            let verdict = if x.dim == 0 {
                format!("A ∩ J = 0 at bound {}", x.bound)
            } else {
                format!("dim A ∩ J = {} at bound {}", x.dim, x.bound)
            };
            let d = &span.dims;
            let body = Body::Ideals {
                bound: d.bound,
                k_dims: d.k_dims.clone(),
                k_dim: d.k_trunc_dim,
                i_dim: d.i_dim,
                w_dim: d.w_dim,
                v_dim: d.v_dim,
                v_mod_i_dim: d.v_mod_i_dim,
                j_dim: d.j_dim,
                v_cap_a: span.w_cap_a().iter().map(|v| dense(v, a.dim())).collect(),
                intersection: intersection_body(&a, &x),
                poisson: samples(&poisson),
                novikov_quotient: nq.as_ref().map(samples),
                j_closure: samples(&closure),
            };
            Ok(finish(req, verdict, ok, body))
        }
        Command::Cur => {
            let n = req.algebra()?;
            let r = verify_cur(&n)?;
            let ext = build_split_extension(&n)?;
            let body = Body::Cur {
                dim_n: r.dim_n,
                dim_n0: r.dim_n0,
                dim_bar: r.dim_bar,
                dim_hat: r.dim_hat,
                dim_cur: r.dim_cur,
                hat_identities: presentation_checks(&builtin("nov")?, &ext.hat)?,
                cur_identities: presentation_checks(&builtin("dinov")?, &cur_algebra(&ext))?,
                embedding_rank: r.embedding_rank,
                vdash_preserved: r.vdash_preserved,
                dashv_preserved: r.dashv_preserved,
                not_constructed: "embedding of the Novikov algebra into a commutative differential algebra".into(),
            };
            let verdict = if r.passed() { "Cur construction verified" } else { "Cur construction fails" };
            Ok(finish(req, verdict.into(), r.passed(), body))
        }
    }
}

impl Certificate {
    pub fn request(&self) -> Request {
        Request { command: self.command, options: self.options.clone(), input: self.input.clone() }
    }

    /// Stable structured rendering.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Certificate> {
        serde_json::from_str(src).map_err(|e| Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() })
    }

    fn basis_names(&self) -> Vec<String> {
        let basis = self.input.algebra.as_ref().and_then(|a| a.get("basis")).and_then(Value::as_array);
        basis.map(|b| b.iter().filter_map(|x| x.as_str().map(str::to_string)).collect()).unwrap_or_default()
    }

    pub fn to_text(&self) -> String {
        let names = self.basis_names();
        let named = |v: &[String]| named(v, &names);
        let mut out = Vec::new();
        match &self.result {
            Body::Dim { dim, .. } => return format!("{dim}\n"),
            Body::Replicate { identities, .. } => return identities.iter().map(|s| format!("{s}\n")).collect(),
            Body::SlsBasis { monomials, count, .. } => {
                out.push(format!("{count} monomials"));
                out.extend(monomials.iter().cloned());
            }
            Body::CheckIdentity { target, checks } => {
                out.push(format!("{} in {target}", self.verdict));
                for c in checks {
                    let status = if c.holds { "holds" } else { "FAILS" };
                    let mut line = format!("{status}: {}", c.identity);
                    if let Some(t) = &c.tuple {
                        line.push_str(&format!(" at ({})", t.join(", ")));
                    }
                    if let Some(v) = &c.value {
                        line.push_str(&format!(" = {v}"));
                    }
                    out.push(line);
                }
            }
            Body::EnvelopeTest { bound, pairs, mprod_failures, grade_failures, triples, identity_failures } => {
                out.push(self.verdict.clone());
                out.push(format!("bound {bound}, {pairs} word pairs, {triples} identity triples"));
                out.extend(mprod_failures.iter().chain(grade_failures).chain(identity_failures).map(|f| format!("failure: {f}")));
            }
            Body::Nice { sls_violation, niceness } => {
                out.push(self.verdict.clone());
                push_sls(&mut out, sls_violation, &names);
                push_niceness(&mut out, niceness, &names);
            }
            Body::Special { sls_violation, niceness, intersection, .. } => {
                out.push(self.verdict.clone());
                push_sls(&mut out, sls_violation, &names);
                push_niceness(&mut out, niceness, &names);
                if let Some(x) = intersection {
                    out.push(format!("dim A ∩ J = {} at bound {}", x.dim, x.bound));
                }
            }
            Body::Ideals { bound, k_dims, k_dim, i_dim, w_dim, v_dim, v_mod_i_dim, j_dim, v_cap_a, intersection, poisson, novikov_quotient, j_closure } => {
                out.push(self.verdict.clone());
                out.push(format!("bound {bound}"));
                out.push(format!("dim K by grade: {k_dims:?} (below grade {bound}: {k_dim})"));
                out.push(format!("dim I = {i_dim}"));
                out.push(format!("dim W = {w_dim}"));
                if let Some(v) = v_dim {
                    out.push(format!("dim V = {v}"));
                }
                out.push(format!("dim V mod I = {v_mod_i_dim}"));
                out.push(format!("dim J = {j_dim}"));
                out.push(format!("dim A ∩ V = {}", v_cap_a.len()));
                for v in &intersection.basis {
                    out.push(format!("A ∩ J contains {}", named(v)));
                }
                let mut sample = |name: &str, s: &Samples| {
                    out.push(format!("{name}: {} checked, {} failures", s.checked, s.failures.len()));
                    out.extend(s.failures.iter().map(|f| format!("failure: {f}")));
                };
                sample("Poisson mod I", poisson);
                if let Some(s) = novikov_quotient {
                    sample("Novikov quotient", s);
                }
                sample("J closure", j_closure);
            }
            Body::Cur { dim_n, dim_n0, dim_bar, dim_hat, dim_cur, hat_identities, cur_identities, embedding_rank, vdash_preserved, dashv_preserved, not_constructed } => {
                out.push(self.verdict.clone());
                out.push(format!("dim N = {dim_n}, dim N0 = {dim_n0}, dim N/N0 = {dim_bar}, dim N^ = {dim_hat}, dim Cur = {dim_cur}"));
                for (name, checks) in [("N^", hat_identities), ("Cur", cur_identities)] {
                    for c in checks {
                        out.push(format!("{name} {}: {}", if c.holds { "holds" } else { "FAILS" }, c.identity));
                    }
                }
                out.push(format!("embedding rank {embedding_rank}, ⊢ preserved {vdash_preserved}, ⊣ preserved {dashv_preserved}"));
                out.push(format!("not constructed: {not_constructed}"));
            }
        }
        out.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// `c name + …` from dense coefficients; falls back to the raw list.
fn named(v: &[String], names: &[String]) -> String {
    if names.len() != v.len() {
        return format!("[{}]", v.join(", "));
    }
    let terms: Vec<String> = v
        .iter()
        .zip(names)
        .filter(|(c, _)| c.as_str() != "0")
        .map(|(c, b)| if c == "1" { b.clone() } else { format!("{c} {b}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn push_sls(out: &mut Vec<String>, v: &Option<SlsFailure>, names: &[String]) {
    if let Some(f) = v {
        out.push(format!("violates {} at ({}) = {}", f.identity, f.tuple.join(", "), named(&f.value, names)));
    }
}

fn push_niceness(out: &mut Vec<String>, n: &Option<Niceness>, names: &[String]) {
    let Some(n) = n else { return };
    out.push(format!("dim of relations = {}", n.relations_dim));
    if let Some(w) = &n.witness {
        let rel: Vec<String> = w.relation.iter().map(|t| format!("{} {}⊗{}", t.coeff, t.left, t.right)).collect();
        out.push(format!("witness relation: {}", rel.join(" + ")));
        out.push(format!("multiplier: {}", w.multiplier));
        out.push(format!("value: {}", named(&w.value, names)));
    } else {
        out.push(format!("mu maps on {} square basis elements", n.square_basis.len()));
    }
}

/// Independent checks that do not go through the producing code path.
fn recheck(cert: &Certificate) -> Result<()> {
    let fail = |m: &str| Err(Error::Violated(m.to_string()));
    let req = cert.request();
    match &cert.result {
        Body::Nice { niceness: Some(n), .. } | Body::Special { niceness: Some(n), .. } => {
            let a = req.algebra()?;
            niceness_report(&a, n)?.verify(&a)?;
        }
        Body::Ideals { intersection, v_cap_a, bound, .. } => {
            let a = req.algebra()?;
            let span = compute_ideals(&a, *bound)?;
            for v in intersection.basis.iter().chain(v_cap_a) {
                let v = undense(v, a.dim())?;
                if v.is_zero() || !span.in_j(&embed(&v))? {
                    return fail("listed intersection vector is not a nonzero element of J");
                }
            }
        }
        Body::Dim { dim, .. } if cert.verdict != dim.to_string() => return fail("verdict disagrees with dimension"),
        _ => {}
    }
    Ok(())
}

/// Replays a certificate: recomputes it from its own inputs, requires an
/// identical result, and re-checks witnesses independently.
pub fn verify(cert: &Certificate) -> Result<()> {
    if cert.format != FORMAT {
        return Err(Error::Mismatch(format!("unknown certificate format `{}`", cert.format)));
    }
    let again = produce(&cert.request())?;
    if again != *cert {
        return Err(Error::Violated("replayed result differs from the certificate".into()));
    }
    recheck(cert)?;
    if !cert.passed {
        return Err(Error::Violated(format!("certificate records a failed verification: {}", cert.verdict)));
    }
    Ok(())
}
