//! Acceptance run: one PASS/FAIL line per criterion. Every result comes from
//! a certificate request so that the determinism criterion can replay them.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lsym::algebra::StructureAlgebra;
use lsym::certificate::{algebra_value, produce, Body, Certificate, Command, Request};
use lsym::fixtures::{random_dinov, random_lsym, random_novikov, sample, sls1, sls2q};
use lsym::identity::{associativity, builtin};
use lsym::replicate::canonical_key;
use lsym::term::{parse_identities, render_identities};

const GOLDEN_DINOV: &str = include_str!("golden/dinov.ids");
const SEED: u64 = 2024;

struct Outcome {
    ok: bool,
    detail: String,
}

struct Run {
    requests: Vec<Request>,
    certs: Vec<String>,
}

impl Run {
    fn issue(&mut self, r: Request) -> Certificate {
        let c = produce(&r).unwrap_or_else(|e| panic!("{:?} failed: {e}", r.command));
        self.certs.push(c.to_json());
        self.requests.push(r);
        c
    }
}

fn on_algebra(command: Command, a: &StructureAlgebra) -> Request {
    let mut r = Request::new(command);
    r.input.algebra = Some(algebra_value(a));
    r
}

fn dim_request(variety: &str, n: usize) -> Request {
    let mut r = Request::new(Command::Dim);
    r.input.variety = Some(variety.into());
    r.options.arity = Some(n);
    r
}

fn dim_of(c: &Certificate) -> usize {
    match c.result {
        Body::Dim { dim, .. } => dim,
        _ => unreachable!(),
    }
}

fn check_identities(run: &mut Run, text: String) -> Certificate {
    let mut r = Request::new(Command::CheckIdentity);
    r.input.identities = Some(text);
    run.issue(r)
}

fn perm_dims(run: &mut Run) -> Outcome {
    let dims: Vec<usize> = (1..=6).map(|k| dim_of(&run.issue(dim_request("perm", k)))).collect();
    Outcome { ok: dims == [1, 2, 3, 4, 5, 6], detail: format!("dims {dims:?}") }
}

fn derived_identities(run: &mut Run) -> Outcome {
    let good = check_identities(run, render_identities(&builtin("sls").unwrap().identities));
    let probe = check_identities(run, render_identities(&[associativity()]));
    let Body::CheckIdentity { checks, .. } = &probe.result else { unreachable!() };
    let nonzero = checks[0].value.clone().unwrap_or_default();
    Outcome {
        ok: good.passed && !probe.passed && !nonzero.is_empty(),
        detail: format!("lsym, SLS-1, SLS-2 vanish; associativity = {nonzero}"),
    }
}

fn replication_golden(run: &mut Run) -> Outcome {
    let mut r = Request::new(Command::Replicate);
    r.input.variety = Some("nov".into());
    let c = run.issue(r);
    let Body::Replicate { identities, .. } = &c.result else { unreachable!() };
    let text: String = identities.iter().map(|s| format!("{s}\n")).collect();
    let keys = |src: &str| -> BTreeSet<_> { parse_identities(src).unwrap().iter().map(canonical_key).collect() };
    let same = keys(&text) == keys(GOLDEN_DINOV);
    let vanish = check_identities(run, text).passed;
    Outcome { ok: same && vanish, detail: format!("{} identities, golden match {same}, vanish in Perm Der {vanish}", identities.len()) }
}

fn sls_dims(run: &mut Run) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=4usize {
        let sls = dim_of(&run.issue(dim_request("sls", n)));
        let mut r = Request::new(Command::SlsBasis);
        r.options.arity = Some(n);
        let basis = match run.issue(r).result {
            Body::SlsBasis { count, .. } => count,
            _ => unreachable!(),
        };
        let lsym = dim_of(&run.issue(dim_request("lsym", n)));
        let nov = dim_of(&run.issue(dim_request("nov", n)));
        let want_lsym = n.pow(n as u32 - 1);
        let want_nov = binomial(2 * n - 2, n - 1);
        ok &= sls == basis && sls == [1, 2, 9, 40][n - 1] && lsym == want_lsym && nov == want_nov;
        parts.push(format!("n={n}: sls {sls}/{basis} lsym {lsym} nov {nov}"));
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn envelope(run: &mut Run) -> Outcome {
    let mut triples = 0;
    let mut failed = 0;
    for (k, a) in sample(SEED, 20, random_lsym).iter().enumerate() {
        let mut r = on_algebra(Command::EnvelopeTest, a);
        r.options.bound = Some(4);
        r.options.samples = Some(100);
        r.options.seed = Some(k as u64);
        let c = run.issue(r);
        if let Body::EnvelopeTest { triples: t, .. } = c.result {
            triples += t;
        }
        failed += usize::from(!c.passed);
    }
    Outcome { ok: failed == 0, detail: format!("20 algebras, 2000 word pairs, {triples} triples, {failed} failing") }
}

fn niceness(run: &mut Run) -> Outcome {
    let nice1 = run.issue(on_algebra(Command::Nice, &sls1()));
    let a = sls2q();
    let c = run.issue(on_algebra(Command::Nice, &a));
    let Body::Nice { niceness: Some(n), .. } = &c.result else { unreachable!() };
    let w = n.witness.as_ref().expect("witness");
    let idx = |s: &str| a.basis.iter().position(|b| b == s).unwrap();
    let xyz = a.mul(&a.mul(&a.e(idx("x")), &a.e(idx("y"))), &a.e(idx("z")));
    let pair = w.relation.len() == 1 && (w.relation[0].left.as_str(), w.relation[0].right.as_str()) == ("x", "z");
    let value_ok = !xyz.is_zero() && w.value == a.dense(&xyz) && w.multiplier == "y";
    let novikov = sample(SEED, 20, random_novikov);
    let nov_nice = novikov.iter().filter(|b| run.issue(on_algebra(Command::Nice, b)).verdict == "nice").count();
    Outcome {
        ok: nice1.verdict == "nice" && c.verdict == "not nice" && c.passed && pair && value_ok && nov_nice == 20,
        detail: format!("sls1 {}, sls2q {} via x⊗z with y, xyz ≠ 0 {value_ok}; Novikov nice {nov_nice}/20", nice1.verdict, c.verdict),
    }
}

fn ideals(run: &mut Run) -> Outcome {
    let mut issue = |a: &StructureAlgebra| {
        let mut r = on_algebra(Command::Ideals, a);
        r.options.bound = Some(4);
        r.options.samples = Some(100);
        r.options.seed = Some(SEED);
        run.issue(r)
    };
    let mut ok = true;
    let mut zero = 0;
    let nice: Vec<StructureAlgebra> = std::iter::once(sls1()).chain(sample(SEED, 5, random_novikov)).collect();
    let mut poisson = 0;
    let mut nq = 0;
    for a in &nice {
        let c = issue(a);
        let Body::Ideals { intersection, poisson: p, novikov_quotient: q, .. } = &c.result else { unreachable!() };
        ok &= c.passed && p.checked >= 50 && q.as_ref().is_some_and(|q| q.checked >= 100);
        zero += usize::from(intersection.dim == 0);
        poisson += p.checked;
        nq += q.as_ref().map_or(0, |q| q.checked);
    }
    let a = sls2q();
    let c = issue(&a);
    let Body::Ideals { v_cap_a, .. } = &c.result else { unreachable!() };
    let xyz_index = a.basis.iter().position(|b| b == "xyz").unwrap();
    let witness = !v_cap_a.is_empty() && v_cap_a.iter().any(|v| v.iter().enumerate().all(|(i, s)| (s != "0") == (i == xyz_index)));
    ok &= c.passed && witness && zero == nice.len();
    Outcome {
        ok,
        detail: format!(
            "A ∩ J = 0 on {zero}/{} nice; sls2q dim A ∩ V = {} with xyz {witness}; Poisson {poisson}, Nov-quot {nq} checks",
            nice.len(),
            v_cap_a.len()
        ),
    }
}

fn cur(run: &mut Run) -> Outcome {
    let algs = sample(SEED, 10, random_dinov);
    let passed = algs.iter().filter(|n| run.issue(on_algebra(Command::Cur, n)).passed).count();
    Outcome { ok: passed == 10, detail: format!("{passed}/10 dialgebras verified") }
}

type Criterion = (&'static str, fn(&mut Run) -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("perm operad dimensions", perm_dims, Duration::from_secs(10)),
        ("derived-product identities", derived_identities, Duration::from_secs(1)),
        ("replication golden", replication_golden, Duration::from_secs(1)),
        ("SLS multilinear dimensions", sls_dims, Duration::from_secs(120)),
        ("envelope suite", envelope, Duration::from_secs(60)),
        ("niceness fixtures", niceness, Duration::from_secs(10)),
        ("ideal suite", ideals, Duration::from_secs(120)),
        ("Cur suite", cur, Duration::from_secs(30)),
    ];
    let mut all = true;
    let mut run = Run { requests: Vec::new(), certs: Vec::new() };
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f(&mut run);
        let elapsed = t.elapsed();
        let ok = out.ok && elapsed < *limit;
        all &= ok;
        let status = if ok { "PASS" } else { "FAIL" };
        println!("{status} {}. {name}: {} [{:.2}s, limit {}s]", k + 1, out.detail, elapsed.as_secs_f64(), limit.as_secs());
    }

    let t = Instant::now();
    let differing = run
        .requests
        .iter()
        .zip(&run.certs)
        .filter(|(r, c)| produce(r).map(|x| x.to_json()).ok().as_ref() != Some(*c))
        .count();
    let ok = differing == 0;
    all &= ok;
    println!(
        "{} 9. determinism: {} certificates replayed, {differing} differ [{:.2}s]",
        if ok { "PASS" } else { "FAIL" },
        run.certs.len(),
        t.elapsed().as_secs_f64()
    );
    if !all {
        std::process::exit(1);
    }
}
