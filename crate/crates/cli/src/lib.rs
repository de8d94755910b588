//! Certification suites and report rendering behind the `species-forge` binary.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use species_forge::catalog::CatalogEntry;
use species_forge::classify::{check_bijective, check_redef, nabla_x_decompose, primitive_basis, primitives, FMu, FPi};
use species_forge::controls::perturbed_systems;
use species_forge::ground::decompositions;
use species_forge::hopf::{
    check_antipode_axiom, check_axiom, check_fsd, check_delta_nabla_identity, compare_tables, dual_transpose, self_compat_both,
    structure_constants, takeuchi_antipode, Axiom, Engine, LinearizedHopf, SelfCompatOutcome, ALL_AXIOMS,
};
use species_forge::linalg::same_span;
use species_forge::order::{
    check_ab, check_basis_theorem, check_lower_lattice, check_order_lemma, check_rectangle, check_transport_invariance,
    compare_pi, pq_tables, reconstruct_pi, shapes, SpeciesOrder,
};
use species_forge::species::transport_check;
use species_forge::vector::q;
use species_forge::{parse_species, GroundSet, SetSpecies, SpeciesError, Vector, Verdict, Witness};

pub const DEFAULT_CEILING: usize = 5;
pub const CEILING_ENV: &str = "SPECIES_FORGE_CEILING";

#[derive(Debug)]
pub enum CliError {
    Species(SpeciesError),
    Config(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Species(e) => write!(f, "{e}"),
            CliError::Config(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for CliError {}

impl From<SpeciesError> for CliError {
    fn from(e: SpeciesError) -> Self {
        CliError::Species(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Ssd,
    Lsd,
    Order,
    Bases,
    Full,
}

impl Suite {
    fn includes(self, part: Suite) -> bool {
        self == Suite::Full || self == part
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Json,
    Md,
    Dot,
}

/// Which product and coproduct to linearize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// (∇^μ, Δ^π), or (∇^μ, Δ^μ) when the species has no coproduct system.
    Auto,
    MuPi,
    MuMu,
    PiMu,
    PiPi,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub species: String,
    pub suite: Suite,
    pub checks: Option<Vec<String>>,
    pub max_n: usize,
    pub output: Output,
    pub seed: u64,
    pub fail_fast: bool,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(species: &str, suite: Suite, max_n: usize) -> Self {
        RunConfig {
            species: species.to_string(),
            suite,
            checks: None,
            max_n,
            output: Output::Json,
            seed: 0,
            fail_fast: false,
            timings: false,
        }
    }
}

/// Rejects n above the ceiling (5, or the value of the environment override).
pub fn validate_max_n(max_n: usize, ceiling_override: Option<&str>) -> Result<(), CliError> {
    let ceiling = match ceiling_override {
        Some(s) => s.parse().map_err(|_| CliError::Config(format!("{CEILING_ENV} must be a number, got {s:?}")))?,
        None => DEFAULT_CEILING,
    };
    if max_n > ceiling {
        return Err(CliError::Config(format!("--max-n {max_n} exceeds the ceiling {ceiling}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Fatal,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Fatal => "fatal",
            Status::Skip => "skip",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub species: String,
    pub n: usize,
    pub status: Status,
    /// Present when the declared outcome is a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    /// The status differs from the declared outcome.
    pub fn unexpected(&self) -> bool {
        match self.status {
            Status::Skip => false,
            Status::Fatal => true,
            s => s != self.expected.unwrap_or(Status::Pass),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub species: String,
    pub suite: Suite,
    pub max_n: usize,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub exit_code: i32,
}

impl SuiteReport {
    fn finish(mut self) -> Self {
        self.exit_code = if self.checks.iter().any(|c| c.status == Status::Fatal) {
            2
        } else if self.checks.iter().any(CheckReport::unexpected) {
            1
        } else {
            0
        };
        self
    }
}

const AXIOMS_CHECKS: &[&str] = &[
    "transport",
    "naturality",
    "associative",
    "commutative",
    "unital",
    "coassociative",
    "cocommutative",
    "counital",
    "hopf_compatible",
    "delta_nabla_identity",
    "antipode_axiom",
];
const SSD_CHECKS: &[&str] = &[
    "selfcompat_direct",
    "selfcompat_local",
    "selfcompat_agree",
    "selfcompat_controls",
    "fsd",
    "fsd_form_agree",
    "fsd_coco",
    "redef",
    "primitives",
    "fmu",
    "antipode_sign",
    "decomposition",
];
const LSD_CHECKS: &[&str] = &["pi_bijective", "pi_selfcompat_theorem", "pi_primitives", "f_pi"];
const ORDER_CHECKS: &[&str] =
    &["order_closure", "order_transport", "order_lemma", "lower_lattice", "order_ab", "reconstruct_pi", "rectangle", "commutative_iff_selfcompat"];
const BASES_CHECKS: &[&str] = &["pq_unitriangular", "basis_theorem", "duality"];

/// Check names of a suite in run order.
pub fn suite_checks(suite: Suite) -> Vec<&'static str> {
    let parts = [
        (Suite::Axioms, AXIOMS_CHECKS),
        (Suite::Ssd, SSD_CHECKS),
        (Suite::Lsd, LSD_CHECKS),
        (Suite::Order, ORDER_CHECKS),
        (Suite::Bases, BASES_CHECKS),
    ];
    parts.iter().filter(|(s, _)| suite.includes(*s)).flat_map(|(_, c)| c.iter().copied()).collect()
}

enum Outcome {
    Ran { verdict: Verdict, expect_pass: bool, fatal: bool, note: Option<String> },
    Skip(String),
}

fn ran(verdict: Verdict, expect_pass: bool) -> Outcome {
    Outcome::Ran { verdict, expect_pass, fatal: false, note: None }
}

/// A failure here would contradict a theorem whose hypotheses were checked.
fn theorem(verdict: Verdict) -> Outcome {
    Outcome::Ran { verdict, expect_pass: true, fatal: true, note: None }
}

struct Ctx {
    entry: CatalogEntry,
    max_n: usize,
    seed: u64,
    selfcompat: OnceCell<Result<SelfCompatOutcome, Witness>>,
    order: OnceCell<Result<Arc<SpeciesOrder>, Witness>>,
}

impl Ctx {
    fn small(&self) -> usize {
        self.max_n.min(3)
    }

    fn triple(&self) -> Option<LinearizedHopf> {
        let mu = self.entry.mu.as_ref()?;
        Some(match &self.entry.pi {
            Some(pi) => LinearizedHopf::mu_pi(mu, pi),
            None => LinearizedHopf::mu_mu(mu),
        })
    }

    fn commutative(&self) -> bool {
        self.entry.mu_flags.is_some_and(|f| f.commutative)
    }

    fn self_compatible_declared(&self) -> bool {
        self.entry.mu_flags.is_some_and(|f| f.commutative && f.injective)
    }

    fn selfcompat(&self) -> &Result<SelfCompatOutcome, Witness> {
        self.selfcompat.get_or_init(|| self_compat_both(self.entry.mu.as_ref().unwrap(), self.small()))
    }

    fn self_compatible(&self) -> bool {
        matches!(self.selfcompat(), Ok(o) if o.holds())
    }

    fn order(&self) -> &Result<Arc<SpeciesOrder>, Witness> {
        self.order.get_or_init(|| {
            SpeciesOrder::new(self.entry.mu.as_ref().unwrap(), self.entry.pi.as_ref().unwrap(), self.max_n).map(Arc::new)
        })
    }

    /// The declared outcome of an axiom on the triple.
    fn axiom_expected(&self, a: Axiom) -> bool {
        let has_pi = self.entry.pi.is_some();
        match a {
            Axiom::Commutative => self.commutative(),
            Axiom::Cocommutative if has_pi => self.entry.pi_flags.is_some_and(|f| f.cocommutative),
            Axiom::Cocommutative => self.commutative(),
            Axiom::HopfCompatible if !has_pi => self.self_compatible_declared(),
            _ => true,
        }
    }

    fn hopf_expected(&self) -> bool {
        self.axiom_expected(Axiom::HopfCompatible)
    }

    fn run(&self, check: &str) -> Outcome {
        let Some(mu) = self.entry.mu.as_ref() else {
            return Outcome::Skip("no multiplicative system (species is not connected)".into());
        };
        let n = self.max_n;
        let p = &self.entry.species;
        if let Some(a) = ALL_AXIOMS.iter().find(|a| a.name() == check) {
            return ran(check_axiom(&self.triple().unwrap(), *a, n), self.axiom_expected(*a));
        }
        match check {
            "transport" => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let verdict = (0..=n).try_for_each(|k| {
                    let trials = (k >= 5).then_some((500, &mut rng as &mut dyn rand::RngCore));
                    transport_check(p.as_ref(), &GroundSet::range(k), trials)
                });
                ran(verdict, true)
            }
            "naturality" => {
                let m = n.min(4);
                let mut verdict = mu.check_naturality(m);
                if let (Ok(()), Some(pi)) = (&verdict, &self.entry.pi) {
                    verdict = pi.check_naturality(m);
                }
                ran(verdict, true)
            }
            "delta_nabla_identity" => ran(check_delta_nabla_identity(&self.triple().unwrap(), n), self.hopf_expected()),
            "antipode_axiom" => ran(check_antipode_axiom(&self.triple().unwrap(), self.small()), self.hopf_expected()),
            "selfcompat_direct" | "selfcompat_local" | "selfcompat_agree" => match self.selfcompat() {
                Err(w) => Outcome::Skip(format!("precondition fails: {w}")),
                Ok(o) => match check {
                    "selfcompat_direct" => ran(o.direct.clone(), self.self_compatible_declared()),
                    "selfcompat_local" => ran(o.local.clone(), self.self_compatible_declared()),
                    _ => theorem(if o.agree() {
                        Ok(())
                    } else {
                        let w = o.direct.clone().err().or(o.local.clone().err()).unwrap();
                        Err(Witness { detail: format!("modes disagree: {}", w.detail), ..w })
                    }),
                },
            },
            "selfcompat_controls" => self.controls(),
            "fsd" | "fsd_form_agree" | "fsd_coco" => {
                let h = LinearizedHopf::mu_mu(mu);
                let r = check_fsd(&h, n);
                match check {
                    "fsd" => ran(r.verdict(), self.self_compatible_declared()),
                    "fsd_form_agree" => theorem(if r.consistent() {
                        Ok(())
                    } else {
                        Err(Witness::new("structure-constant comparison and invariant form disagree"))
                    }),
                    _ => {
                        if r.verdict().is_err() {
                            return Outcome::Skip("not freely self-dual".into());
                        }
                        theorem(check_axiom(&h, Axiom::Commutative, n).and_then(|_| check_axiom(&h, Axiom::Cocommutative, n)))
                    }
                }
            }
            "redef" => {
                if !self.self_compatible() {
                    return Outcome::Skip("requires a self-compatible product".into());
                }
                theorem(check_redef(&LinearizedHopf::mu_mu(mu), n))
            }
            "primitives" | "fmu" | "antipode_sign" | "decomposition" => {
                if !self.self_compatible() {
                    return Outcome::Skip("requires a self-compatible product".into());
                }
                let h = LinearizedHopf::mu_mu(mu);
                theorem(match check {
                    "primitives" => {
                        let q = primitive_basis(mu);
                        (1..=n).try_for_each(|k| {
                            let g = GroundSet::range(k);
                            let set: Vec<Vector> = q.elements(&g).into_iter().map(Vector::basis).collect();
                            if same_span(&set, &primitives(&h, &g).basis) {
                                Ok(())
                            } else {
                                Err(Witness::new("primitive basis does not span the primitive elements").parts([&g]))
                            }
                        })
                    }
                    "fmu" => FMu::new(mu).check(n),
                    "antipode_sign" => antipode_sign(&h, mu, n),
                    _ => (0..=n).try_for_each(|k| nabla_x_decompose(&h, &GroundSet::range(k)).map(|_| ())),
                })
            }
            "pi_bijective" | "pi_selfcompat_theorem" | "pi_primitives" | "f_pi" => {
                let Some(pi) = self.entry.pi.as_ref() else {
                    return Outcome::Skip("no comultiplicative system".into());
                };
                let bijective_declared = self.entry.pi_flags.is_some_and(|f| f.bijective());
                let m = self.small();
                let pp = LinearizedHopf::pi_pi(pi);
                let self_compat = check_axiom(&pp, Axiom::HopfCompatible, m).is_ok();
                match check {
                    "pi_bijective" => ran(check_bijective(pi, n), bijective_declared),
                    "pi_selfcompat_theorem" => {
                        let coco = check_axiom(&pp, Axiom::Cocommutative, m).is_ok();
                        let bij = check_bijective(pi, m).is_ok();
                        theorem(if self_compat == (coco && bij) {
                            Ok(())
                        } else {
                            Err(Witness::new(format!(
                                "Hopf self-compatible = {self_compat} but cocommutative = {coco}, bijective = {bij}"
                            )))
                        })
                    }
                    _ if !self_compat => Outcome::Skip("coproduct system is not Hopf self-compatible".into()),
                    "pi_primitives" => {
                        let colors = p.elements(&GroundSet::singleton(1)).len();
                        theorem((1..=m).try_for_each(|k| {
                            let d = primitives(&pp, &GroundSet::range(k)).dim();
                            let want = if k == 1 { colors } else { 0 };
                            if d == want {
                                Ok(())
                            } else {
                                Err(Witness::new(format!("primitives have dimension {d}, expected {want}")).parts([&GroundSet::range(k)]))
                            }
                        }))
                    }
                    _ => theorem(FPi::new(pi, m).and_then(|f| f.check(m))),
                }
            }
            "commutative_iff_selfcompat" => {
                let Some(pi) = self.entry.pi.as_ref() else {
                    return Outcome::Skip("no comultiplicative system".into());
                };
                let h = LinearizedHopf::mu_pi(mu, pi);
                let m = self.small();
                if check_axiom(&h, Axiom::HopfCompatible, m).is_err() {
                    return Outcome::Skip("triple is not a Hopf monoid".into());
                }
                let comm = check_axiom(&h, Axiom::Commutative, m).is_ok();
                theorem(match self.selfcompat() {
                    Ok(o) if o.holds() == comm => Ok(()),
                    Ok(o) => Err(Witness::new(format!("commutative = {comm} but self-compatible = {}", o.holds()))),
                    Err(w) => Err(w.clone()),
                })
            }
            "duality" => {
                let Some(pi) = self.entry.pi.as_ref() else {
                    return Outcome::Skip("no comultiplicative system".into());
                };
                theorem(compare_tables(&dual_transpose(&LinearizedHopf::mu_pi(mu, pi)), &LinearizedHopf::pi_mu(pi, mu), false, n))
            }
            _ => self.order_check(check),
        }
    }

    fn order_check(&self, check: &str) -> Outcome {
        let (mu, n) = (self.entry.mu.as_ref().unwrap(), self.max_n);
        let Some(pi) = self.entry.pi.as_ref() else {
            return Outcome::Skip("no comultiplicative system".into());
        };
        if !self.commutative() {
            return Outcome::Skip("order undefined for a non-commutative product".into());
        }
        let order = match self.order() {
            Ok(o) => o.clone(),
            Err(w) => {
                return if check == "order_closure" { theorem(Err(w.clone())) } else { Outcome::Skip("order could not be built".into()) };
            }
        };
        match check {
            "order_closure" => theorem(Ok(())),
            "order_transport" => theorem((0..=self.small()).try_for_each(|k| check_transport_invariance(mu, pi, k))),
            "order_lemma" => theorem(check_order_lemma(&order, mu, pi, n)),
            "lower_lattice" => {
                let fmu = FMu::new(mu);
                let mut missing = 0;
                let verdict = (0..=n).try_for_each(|k| {
                    let g = GroundSet::range(k);
                    let sh = shapes(&fmu, &g);
                    order.slice(k).elements().iter().try_for_each(|l| {
                        let r = check_lower_lattice(order.slice(k), &sh, l);
                        missing += usize::from(r.missing_shape.is_some());
                        r.lattice.and(r.shape)
                    })
                });
                let note = (missing > 0).then(|| format!("shape map not surjective on {missing} lower intervals"));
                Outcome::Ran { verdict, expect_pass: true, fatal: true, note }
            }
            "order_ab" => theorem(check_ab(&order, mu, n)),
            "reconstruct_pi" => theorem(compare_pi(pi, &reconstruct_pi(order.clone(), mu), n)),
            "rectangle" => theorem(check_rectangle(mu, pi, n.min(4), 3)),
            "pq_unitriangular" => {
                theorem((0..=n).try_for_each(|k| pq_tables(&order, &GroundSet::range(k)).check_unitriangular(&order)))
            }
            "basis_theorem" => theorem(check_basis_theorem(&order, mu, pi, n)),
            other => unreachable!("unknown check {other}"),
        }
    }

    fn controls(&self) -> Outcome {
        let m = self.small();
        let systems = perturbed_systems(self.seed, 50);
        let mut design = Ok(());
        for c in &systems {
            let o = match self_compat_both(&c.mu, m) {
                Ok(o) => o,
                Err(w) => return theorem(Err(w)),
            };
            if !o.agree() {
                return theorem(Err(Witness::new(format!("modes disagree on {} ({})", c.mu.name, c.family))));
            }
            if design.is_ok() && o.holds() != c.expected.self_compatible() {
                design = Err(Witness::new(format!("{} ({}) did not break as designed", c.mu.name, c.family)));
            }
        }
        Outcome::Ran { verdict: design, expect_pass: true, fatal: false, note: Some(format!("{} seeded systems", systems.len())) }
    }
}

fn antipode_sign(h: &LinearizedHopf, mu: &species_forge::MultSystem, n: usize) -> Verdict {
    let fmu = FMu::new(mu);
    let e = Engine::new(h);
    for k in 0..=n {
        let g = GroundSet::range(k);
        let sh = shapes(&fmu, &g);
        for x in e.elements(&g).iter() {
            let blocks = sh.get(x).map_or(0, Vec::len);
            let sign = if blocks.is_multiple_of(2) { q(1) } else { q(-1) };
            let v = Vector::basis(x.clone());
            let got = takeuchi_antipode(h, &v);
            if got != v.scale(&sign) {
                return Err(Witness::new(format!("S = {got}, expected sign (-1)^{blocks}")).elements([x]));
            }
        }
    }
    Ok(())
}

/// Runs the configured checks in their fixed order.
pub fn cmd_check(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    let entry = parse_species(&cfg.species)?;
    let names: Vec<&str> = match &cfg.checks {
        None => suite_checks(cfg.suite),
        Some(list) => {
            let known = suite_checks(Suite::Full);
            let mut out = Vec::new();
            for c in list {
                let Some(k) = known.iter().find(|k| *k == c) else {
                    return Err(CliError::Config(format!("unknown check {c:?}; valid checks: {}", known.join(", "))));
                };
                out.push(*k);
            }
            out
        }
    };
    let ctx = Ctx { entry, max_n: cfg.max_n, seed: cfg.seed, selfcompat: OnceCell::new(), order: OnceCell::new() };
    let mut report = SuiteReport {
        species: ctx.entry.name.clone(),
        suite: cfg.suite,
        max_n: cfg.max_n,
        seed: cfg.seed,
        checks: Vec::new(),
        exit_code: 0,
    };
    for name in names {
        let start = Instant::now();
        let outcome = ctx.run(name);
        let elapsed_ms = cfg.timings.then(|| start.elapsed().as_millis() as u64);
        let mut r = CheckReport {
            check: name.to_string(),
            species: ctx.entry.name.clone(),
            n: cfg.max_n,
            status: Status::Skip,
            expected: None,
            witness: None,
            note: None,
            elapsed_ms,
        };
        match outcome {
            Outcome::Skip(note) => r.note = Some(note),
            Outcome::Ran { verdict, expect_pass, fatal, note } => {
                r.expected = (!expect_pass).then_some(Status::Fail);
                r.note = note;
                r.status = match verdict {
                    Ok(()) => Status::Pass,
                    Err(w) => {
                        r.witness = Some(w);
                        if fatal {
                            Status::Fatal
                        } else {
                            Status::Fail
                        }
                    }
                };
            }
        }
        let stop = cfg.fail_fast && r.unexpected();
        report.checks.push(r);
        if stop {
            break;
        }
    }
    Ok(report.finish())
}

pub fn render_suite(report: &SuiteReport, output: Output) -> Result<String, CliError> {
    match output {
        Output::Json => Ok(to_json(report)),
        Output::Md => {
            let mut s = format!("# {} ({:?} suite, n <= {}, seed {})\n\n", report.species, report.suite, report.max_n, report.seed);
            s.push_str("| check | status | expected | detail |\n|---|---|---|---|\n");
            for c in &report.checks {
                let detail = match (&c.witness, &c.note) {
                    (Some(w), _) => w.to_string(),
                    (None, Some(n)) => n.clone(),
                    _ => String::new(),
                };
                let expected = c.expected.map(|e| e.to_string()).unwrap_or_else(|| "pass".into());
                s.push_str(&format!("| {} | {} | {} | {} |\n", c.check, c.status, expected, detail.replace('|', "\\|")));
            }
            s.push_str(&format!("\nexit code {}\n", report.exit_code));
            Ok(s)
        }
        Output::Dot => Err(CliError::Config("dot output is only available for hasse".into())),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn entry_with_mu(spec: &str) -> Result<CatalogEntry, CliError> {
    let e = parse_species(spec)?;
    if e.mu.is_none() {
        return Err(CliError::Config(format!("{} has no multiplicative system", e.name)));
    }
    Ok(e)
}

fn variant(e: &CatalogEntry, v: Variant) -> Result<LinearizedHopf, CliError> {
    let mu = e.mu.as_ref().ok_or_else(|| CliError::Config(format!("{} has no multiplicative system", e.name)))?;
    let pi = || e.pi.as_ref().ok_or_else(|| CliError::Config(format!("{} has no comultiplicative system", e.name)));
    Ok(match v {
        Variant::Auto => match &e.pi {
            Some(pi) => LinearizedHopf::mu_pi(mu, pi),
            None => LinearizedHopf::mu_mu(mu),
        },
        Variant::MuPi => LinearizedHopf::mu_pi(mu, pi()?),
        Variant::MuMu => LinearizedHopf::mu_mu(mu),
        Variant::PiMu => LinearizedHopf::pi_mu(pi()?, mu),
        Variant::PiPi => LinearizedHopf::pi_pi(pi()?),
    })
}

#[derive(Serialize)]
struct ConstantRow {
    left: String,
    right: String,
    result: String,
    value: String,
}

#[derive(Serialize)]
struct ConstantBlock {
    s: String,
    t: String,
    product: Vec<ConstantRow>,
    coproduct: Vec<ConstantRow>,
}

#[derive(Serialize)]
struct TableReport {
    species: String,
    structure: Option<String>,
    dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constants: Option<Vec<ConstantBlock>>,
}

/// Dimensions of each component and optionally the structure constants.
pub fn cmd_table(spec: &str, max_n: usize, constants: bool, v: Variant, output: Output) -> Result<String, CliError> {
    let e = parse_species(spec)?;
    let dims = (0..=max_n).map(|n| e.species.elements(&GroundSet::range(n)).len()).collect();
    let (structure, constants) = if constants {
        let h = variant(&e, v)?;
        let mut blocks = Vec::new();
        for n in 0..=max_n {
            for d in decompositions(&GroundSet::range(n), 2, false) {
                let c = structure_constants(&h, &d[0], &d[1]);
                let rows = |t: &species_forge::hopf::constants::ConstantTable| {
                    t.iter()
                        .map(|((x, y, z), c)| ConstantRow {
                            left: x.to_string(),
                            right: y.to_string(),
                            result: z.to_string(),
                            value: c.to_string(),
                        })
                        .collect()
                };
                blocks.push(ConstantBlock { s: d[0].to_string(), t: d[1].to_string(), product: rows(&c.product), coproduct: rows(&c.coproduct) });
            }
        }
        (Some(h.name.clone()), Some(blocks))
    } else {
        (None, None)
    };
    let report = TableReport { species: e.name.clone(), structure, dims, constants };
    match output {
        Output::Json => Ok(to_json(&report)),
        Output::Md => {
            let mut s = format!("# {}\n\n| n | dim |\n|---|---|\n", report.species);
            for (n, d) in report.dims.iter().enumerate() {
                s.push_str(&format!("| {n} | {d} |\n"));
            }
            for b in report.constants.iter().flatten() {
                s.push_str(&format!("\n## S = {}, T = {}\n\n| kind | x | y | z | value |\n|---|---|---|---|---|\n", b.s, b.t));
                for (kind, rows) in [("product", &b.product), ("coproduct", &b.coproduct)] {
                    for r in rows {
                        s.push_str(&format!("| {kind} | {} | {} | {} | {} |\n", r.left, r.right, r.result, r.value));
                    }
                }
            }
            Ok(s)
        }
        Output::Dot => Err(CliError::Config("dot output is only available for hasse".into())),
    }
}

/// The Hasse diagram of ≺ on P[{1..n}] with n = max_n.
pub fn cmd_hasse(spec: &str, n: usize, output: Output) -> Result<String, CliError> {
    let e = entry_with_mu(spec)?;
    let pi = e.pi.as_ref().ok_or_else(|| CliError::Config(format!("{} has no comultiplicative system", e.name)))?;
    if !e.mu_flags.is_some_and(|f| f.commutative) {
        return Err(CliError::Config(format!("the order is undefined for {}: its product is not commutative", e.name)));
    }
    let slice = species_forge::order::compute_order(e.mu.as_ref().unwrap(), pi, &GroundSet::range(n))
        .map_err(|w| CliError::Config(format!("order failed: {w}")))?;
    match output {
        Output::Dot => Ok(slice.to_dot(&e.name)),
        Output::Json => {
            #[derive(Serialize)]
            struct Hasse {
                species: String,
                n: usize,
                nodes: Vec<String>,
                covers: Vec<(String, String)>,
            }
            Ok(to_json(&Hasse {
                species: e.name.clone(),
                n,
                nodes: slice.elements().iter().map(|x| x.to_string()).collect(),
                covers: slice.covers().iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            }))
        }
        Output::Md => {
            let mut s = format!("# Hasse diagram of {} on {}\n\n", e.name, GroundSet::range(n));
            for (a, b) in slice.covers() {
                s.push_str(&format!("- {a} < {b}\n"));
            }
            Ok(s)
        }
    }
}

/// Outcome of the certificate attached to a constructed map.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Certificate {
    /// A failed hypothesis is a plain fail; a failure once the hypotheses hold is fatal.
    fn new(hypotheses: Verdict, conclusion: impl FnOnce() -> Verdict) -> Self {
        let (status, witness) = match hypotheses.map(|_| conclusion()) {
            Err(w) => (Status::Fail, Some(w)),
            Ok(Err(w)) => (Status::Fatal, Some(w)),
            Ok(Ok(())) => (Status::Pass, None),
        };
        Certificate { status, witness }
    }

    fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Rendered output with the process exit code it implies.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub text: String,
    pub exit_code: i32,
}

impl From<String> for Rendered {
    fn from(text: String) -> Self {
        Rendered { text, exit_code: 0 }
    }
}

fn render_map(title: &str, rows: &BTreeMap<usize, Vec<(String, String)>>, cert: Option<&Certificate>, output: Output) -> Result<Rendered, CliError> {
    #[derive(Serialize)]
    struct Row<'a> {
        n: usize,
        input: &'a str,
        output: &'a str,
    }
    #[derive(Serialize)]
    struct MapReport<'a> {
        title: &'a str,
        rows: Vec<Row<'a>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        status: Option<Status>,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<&'a Witness>,
    }
    let report = MapReport {
        title,
        rows: rows.iter().flat_map(|(n, v)| v.iter().map(move |(a, b)| Row { n: *n, input: a, output: b })).collect(),
        status: cert.map(|c| c.status),
        witness: cert.and_then(|c| c.witness.as_ref()),
    };
    let text = match output {
        Output::Json => to_json(&report),
        Output::Md => {
            let mut s = format!("# {title}\n\n| n | input | output |\n|---|---|---|\n");
            for r in &report.rows {
                s.push_str(&format!("| {} | {} | {} |\n", r.n, r.input, r.output));
            }
            if let Some(st) = report.status {
                s.push_str(&format!("\nstatus: {st}\n"));
            }
            if let Some(w) = report.witness {
                s.push_str(&format!("witness: {w}\n"));
            }
            s
        }
        Output::Dot => return Err(CliError::Config("dot output is only available for hasse".into())),
    };
    let exit_code = match cert.map(|c| c.status) {
        Some(Status::Fatal) => 2,
        Some(Status::Fail) => 1,
        _ => 0,
    };
    Ok(Rendered { text, exit_code })
}

/// Takeuchi's antipode on every basis element.
pub fn cmd_antipode(spec: &str, max_n: usize, v: Variant, output: Output) -> Result<Rendered, CliError> {
    let e = parse_species(spec)?;
    let h = variant(&e, v)?;
    let mut rows = BTreeMap::new();
    for n in 0..=max_n {
        let v: Vec<(String, String)> = e
            .species
            .elements(&GroundSet::range(n))
            .into_iter()
            .map(|x| (x.to_string(), takeuchi_antipode(&h, &Vector::basis(x)).to_string()))
            .collect();
        rows.insert(n, v);
    }
    render_map(&format!("antipode of {}", h.name), &rows, None, output)
}

/// A basis of the primitive elements of each component.
pub fn cmd_primitives(spec: &str, max_n: usize, v: Variant, output: Output) -> Result<Rendered, CliError> {
    let e = parse_species(spec)?;
    let h = variant(&e, v)?;
    let mut rows = BTreeMap::new();
    for n in 0..=max_n {
        let space = primitives(&h, &GroundSet::range(n));
        rows.insert(n, space.basis.iter().enumerate().map(|(i, b)| (format!("#{i}"), b.to_string())).collect());
    }
    let dims: Vec<String> = rows.values().map(|v: &Vec<(String, String)>| v.len().to_string()).collect();
    render_map(&format!("primitives of {} (dims {})", h.name, dims.join(", ")), &rows, None, output)
}

/// The isomorphism from labeled partitions, with its certificate.
pub fn cmd_fmu(spec: &str, max_n: usize, output: Output) -> Result<Rendered, CliError> {
    let e = entry_with_mu(spec)?;
    let f = FMu::new(e.mu.as_ref().unwrap());
    let cert = Certificate::new(self_compat_both(&f.mu, max_n.min(3)).and_then(|o| o.direct), || f.check(max_n));
    let mut rows = BTreeMap::new();
    if cert.passed() {
        for n in 0..=max_n {
            let v = f.source.elements(&GroundSet::range(n)).iter().map(|x| (x.to_string(), f.apply(x).to_string())).collect();
            rows.insert(n, v);
        }
    }
    render_map(&format!("f^mu for {}", e.name), &rows, Some(&cert), output)
}

/// The isomorphism from colored maps, with its certificate.
pub fn cmd_fpi(spec: &str, max_n: usize, output: Output) -> Result<Rendered, CliError> {
    let e = parse_species(spec)?;
    let pi = e.pi.as_ref().ok_or_else(|| CliError::Config(format!("{} has no comultiplicative system", e.name)))?;
    let built = FPi::new(pi, max_n);
    let cert = Certificate::new(built.as_ref().map(|_| ()).map_err(Clone::clone), || built.as_ref().unwrap().check(max_n));
    let mut rows = BTreeMap::new();
    if let (Ok(f), true) = (&built, cert.passed()) {
        for n in 0..=max_n {
            let v = f.maps.species.elements(&GroundSet::range(n)).iter().map(|h| (h.to_string(), f.apply(h).to_string())).collect();
            rows.insert(n, v);
        }
    }
    render_map(&format!("f^pi for {}", e.name), &rows, Some(&cert), output)
}

/// π rebuilt from μ and the order, compared elementwise with the original.
pub fn cmd_reconstruct_pi(spec: &str, max_n: usize, output: Output) -> Result<Rendered, CliError> {
    let e = entry_with_mu(spec)?;
    let pi = e.pi.as_ref().ok_or_else(|| CliError::Config(format!("{} has no comultiplicative system", e.name)))?;
    let mu = e.mu.as_ref().unwrap();
    let order = SpeciesOrder::new(mu, pi, max_n).map_err(|w| CliError::Config(format!("order failed: {w}")))?;
    let order = Arc::new(order);
    let cert = Certificate::new(Ok(()), || {
        check_ab(&order, mu, max_n).and_then(|_| compare_pi(pi, &reconstruct_pi(order.clone(), mu), max_n))
    });
    let mut rows = BTreeMap::new();
    if cert.passed() {
        let rebuilt = reconstruct_pi(order, mu);
        for n in 0..=max_n {
            let g = GroundSet::range(n);
            let mut v = Vec::new();
            for d in decompositions(&g, 2, true) {
                for z in e.species.elements(&g) {
                    let (a, b) = rebuilt.apply(&d[0], &d[1], &z);
                    v.push((format!("pi[{},{}]({z})", d[0], d[1]), format!("({a}, {b})")));
                }
            }
            rows.insert(n, v);
        }
    }
    render_map(&format!("reconstructed coproduct for {}", e.name), &rows, Some(&cert), output)
}
