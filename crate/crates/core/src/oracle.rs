//! Exhaustive ground truth for the gadget family: optimum covers, checks of
//! the structural claims about cores and feasible sets, and the ratio
//! experiments.

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::covering::{
    covers, covers_by_enumeration, cores_bruteforce, is_minimal_cover, violated_cuts, Instance,
    DEFAULT_ENUM_BOUND,
};
use crate::error::{Error, Result};
use crate::multigraph::Cut;
use crate::rational::{self, Rational};
use crate::tightgen::{
    analytic_initial_cores, degree_identities, expected_family_slices, generate, GadgetParams,
    LabeledInstance,
};
use crate::wgmv::{dual_feasible, dual_objective, run, TiePolicy};

pub const DEFAULT_LINK_BOUND: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Node ceiling for cut enumeration.
    pub node_bound: usize,
    /// Link ceiling for subset enumeration.
    pub link_bound: usize,
    /// Worker threads for subset enumeration; 1 runs inline.
    pub jobs: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            node_bound: DEFAULT_ENUM_BOUND,
            link_bound: DEFAULT_LINK_BOUND,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub cost: Rational,
    pub witness: Vec<usize>,
}

/// Cheapest feasible link subset by exhaustive search.
///
/// Subsets are visited by increasing size and, within a size, in
/// lexicographic index order. The search stops once the cheapest possible
/// subset of the next size cannot beat the incumbent. Among equal costs the
/// smaller subset wins, then the lexicographically smaller one.
pub fn brute_force_optimum(inst: &Instance, cfg: &OracleConfig) -> Result<Optimum> {
    let m = inst.links.len();
    if m > cfg.link_bound {
        return Err(Error::BoundExceeded {
            what: "links",
            size: m,
            bound: cfg.link_bound,
        });
    }
    if !covers(inst, &inst.all_links())? {
        return Err(Error::Infeasible("the full link set does not cover".into()));
    }
    let mut sorted_costs: Vec<&Rational> = inst.links.iter().map(|l| &l.cost).collect();
    sorted_costs.sort();
    let mut cheapest_of_size = vec![rational::zero()];
    for c in sorted_costs {
        let next = cheapest_of_size.last().unwrap() + c;
        cheapest_of_size.push(next);
    }

    let pool = if cfg.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.jobs)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut best: Option<Optimum> = None;
    for (size, cheapest) in cheapest_of_size.iter().enumerate() {
        if let Some(b) = &best {
            if *cheapest >= b.cost {
                break;
            }
        }
        let found = match &pool {
            None => best_of_size_seq(inst, size, best.as_ref().map(|b| &b.cost))?,
            Some(pool) => {
                pool.install(|| best_of_size_par(inst, size, best.as_ref().map(|b| &b.cost)))?
            }
        };
        if let Some(f) = found {
            best = Some(f);
        }
    }
    let best = best.expect("the full link set is feasible");
    debug_assert!(covers(inst, &best.witness).unwrap_or(false));
    Ok(best)
}

fn best_of_size_seq(
    inst: &Instance,
    size: usize,
    below: Option<&Rational>,
) -> Result<Option<Optimum>> {
    let mut best: Option<Optimum> = None;
    for subset in (0..inst.links.len()).combinations(size) {
        let cost = inst.cost_of(&subset);
        let limit = best.as_ref().map(|b| &b.cost).or(below);
        if limit.is_some_and(|l| cost >= *l) {
            continue;
        }
        if covers(inst, &subset)? {
            best = Some(Optimum {
                cost,
                witness: subset,
            });
        }
    }
    Ok(best)
}

fn best_of_size_par(
    inst: &Instance,
    size: usize,
    below: Option<&Rational>,
) -> Result<Option<Optimum>> {
    let results: Vec<Result<Option<Optimum>>> = (0..inst.links.len())
        .combinations(size)
        .par_bridge()
        .map(|subset| {
            let cost = inst.cost_of(&subset);
            if below.is_some_and(|l| cost >= *l) {
                return Ok(None);
            }
            Ok(covers(inst, &subset)?.then_some(Optimum {
                cost,
                witness: subset,
            }))
        })
        .filter(|r| !matches!(r, Ok(None)))
        .collect();
    let mut best: Option<Optimum> = None;
    for r in results {
        let Some(cand) = r? else { continue };
        let better = match &best {
            None => true,
            Some(b) => (&cand.cost, &cand.witness) < (&b.cost, &b.witness),
        };
        if better {
            best = Some(cand);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: if passed { String::new() } else { detail.into() },
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn named(li: &LabeledInstance, s: &Cut) -> String {
    let g = &li.instance.graph;
    format!(
        "{{{}}}",
        s.members().into_iter().map(|v| g.display_name(v)).join(",")
    )
}

fn named_list(li: &LabeledInstance, cuts: &[Cut]) -> String {
    cuts.iter().map(|c| named(li, c)).join(" ")
}

/// Compares two sorted cut lists and describes the first discrepancy.
fn diff_cuts(li: &LabeledInstance, got: &[Cut], want: &[Cut]) -> String {
    let extra: Vec<Cut> = got.iter().filter(|c| !want.contains(c)).cloned().collect();
    let missing: Vec<Cut> = want.iter().filter(|c| !got.contains(c)).cloned().collect();
    format!(
        "unexpected: [{}] missing: [{}]",
        named_list(li, &extra),
        named_list(li, &missing)
    )
}

/// Checks the degree identities, that the enumerated cores are exactly
/// `{r}, {t_i}, C`, that the small cuts avoiding `r` and not containing `C`
/// are exactly `{t_i}`, the `A`-unions, `X_i` and `Y_i`, and the
/// non-membership facts the argument relies on.
pub fn verify_cores_lemma(li: &LabeledInstance, node_bound: usize) -> Result<Report> {
    let inst = &li.instance;
    let g = &inst.graph;
    let GadgetParams { q, p, k, .. } = li.params;
    let n = li.n();
    let mut rep = Report::new(format!("cores (q={q}, p={p}, k={k})"));
    let d = |s: &Cut| g.cut_degree(s);

    for c in degree_identities(li) {
        let detail = format!("measured {}, expected {}", c.actual, c.expected);
        rep.check(c.name.clone(), c.holds(), detail);
    }

    let expected = expected_family_slices(li)?;
    let cores = cores_bruteforce(inst, &[], node_bound)?;
    rep.check(
        "cores of the empty selection are {r}, {t_i}, C",
        cores == expected.cores,
        diff_cuts(li, &cores, &expected.cores),
    );

    let fr = violated_cuts(inst, &[], node_bound)?;
    let c_set = li.c_cut();
    let outside: Vec<Cut> = fr.iter().filter(|s| !c_set.is_subset_of(s)).cloned().collect();
    rep.check(
        "small cuts avoiding r and not containing C are {t_i}, A-unions, X_i, Y_i",
        outside == expected.fr_minus_frc,
        diff_cuts(li, &outside, &expected.fr_minus_frc),
    );

    let asym: Vec<&Cut> = fr
        .iter()
        .filter(|s| d(s).ok() != d(&s.complement()).ok())
        .collect();
    rep.check(
        "every enumerated small cut has a complement of equal degree",
        asym.is_empty(),
        format!("asymmetric: {}", asym.len()),
    );

    // C is inclusion-minimal: no proper nonempty subset is small.
    let c_members = c_set.members();
    let mut small_inside = Vec::new();
    for bits in 1u64..(1 << c_members.len()) - 1 {
        let sub = Cut::new(
            n,
            c_members
                .iter()
                .enumerate()
                .filter(|(j, _)| bits >> j & 1 == 1)
                .map(|(_, &v)| v),
        )?;
        if d(&sub)? < k {
            small_inside.push(sub);
        }
    }
    rep.check(
        "no proper subset of C is small",
        small_inside.is_empty(),
        format!("small: [{}]", named_list(li, &small_inside)),
    );

    let b = Cut::singleton(n, li.b)?;
    let z = Cut::singleton(n, li.z)?;
    let db = d(&b)?;
    let dz = d(&z)?;
    rep.check("d(b) >= k", db >= k, format!("d(b) = {db}"));
    rep.check("d(z) >= k", dz >= k, format!("d(z) = {dz}"));
    for (i, gn) in li.gadgets.iter().enumerate() {
        let sfx = if p == 1 { String::new() } else { format!("_{}", i + 1) };
        let a = Cut::singleton(n, gn.a)?;
        let x = Cut::singleton(n, gn.x)?;
        let y = Cut::singleton(n, gn.y)?;
        let da = d(&a)?;
        let dy = d(&y)?;
        rep.check(format!("d(a{sfx}) >= k"), da >= k, format!("d(a{sfx}) = {da}"));
        rep.check(format!("d(y{sfx}) >= k+1"), dy > k, format!("d(y{sfx}) = {dy}"));
        let dab = d(&a.union(&b)?)?;
        rep.check(
            format!("d({{a{sfx},b}}) = d(a{sfx}) + d(b)"),
            dab == da + db,
            format!("{dab} vs {}", da + db),
        );
        let dx = d(&x)?;
        let dxz = d(&x.union(&z)?)?;
        rep.check(
            format!("d({{x{sfx},z}}) = d(x{sfx}) + d(z)"),
            dxz == dx + dz,
            format!("{dxz} vs {}", dx + dz),
        );
    }

    for bits in 1u64..(1 << p) {
        let u = li.a_union(bits);
        let du = d(&u)?;
        let want = bits.count_ones() as u64 * (2 * q - 1);
        rep.check(
            format!("d({}) = |I|(2q-1) < k", named(li, &u)),
            du == want && du < k,
            format!("measured {du}, expected {want}"),
        );
    }
    Ok(rep)
}

/// Checks that the red and the blue link sets are each feasible and
/// inclusion-minimal, and the per-link witnesses: which link alone covers
/// which cut within its colour.
pub fn verify_feasibility_lemma(li: &LabeledInstance, node_bound: usize) -> Result<Report> {
    let inst = &li.instance;
    let GadgetParams { q, p, k, .. } = li.params;
    let n = li.n();
    let mut rep = Report::new(format!("feasibility (q={q}, p={p}, k={k})"));

    for (colour, set) in [("red", &li.red), ("blue", &li.blue)] {
        let by_cut = covers(inst, set)?;
        let by_enum = covers_by_enumeration(inst, set, node_bound)?;
        rep.check(format!("{colour} covers (min cut)"), by_cut, "uncovered small cut");
        rep.check(
            format!("{colour} covers (enumeration)"),
            by_enum,
            "uncovered small cut",
        );
        let minimal = match is_minimal_cover(inst, set) {
            Ok(m) => m,
            Err(Error::Infeasible(_)) => false,
            Err(e) => return Err(e),
        };
        rep.check(
            format!("{colour} is inclusion-minimal"),
            minimal,
            "a proper subset covers (or the set is infeasible)",
        );
    }

    // The unique covering link among `set` for cut `s` must be `who`.
    let sole = |rep: &mut Report, what: &str, set: &[usize], who: usize, s: &Cut| {
        let crossing: Vec<usize> = set
            .iter()
            .copied()
            .filter(|&e| inst.links[e].crosses(s))
            .collect();
        rep.check(
            what.to_owned(),
            crossing == vec![who],
            format!("crossing links: {crossing:?}"),
        );
    };
    let crosses_all = |rep: &mut Report, what: &str, e: usize, cuts: &[Cut]| {
        let missed: Vec<Cut> = cuts
            .iter()
            .filter(|s| !inst.links[e].crosses(s))
            .cloned()
            .collect();
        rep.check(
            what.to_owned(),
            missed.is_empty(),
            format!("misses [{}]", named_list(li, &missed)),
        );
    };

    let c_set = li.c_cut();
    let frc: Vec<Cut> = violated_cuts(inst, &[], node_bound)?
        .into_iter()
        .filter(|s| c_set.is_subset_of(s))
        .collect();
    let all_not_r = li.r_cut().complement();
    rep.check(
        "V \\ {r} is small",
        inst.is_small_cut(&all_not_r)?,
        "d(r) >= k",
    );

    for (i, gl) in li.gadget_links.iter().enumerate() {
        let sfx = if p == 1 { String::new() } else { format!("_{}", i + 1) };
        let unions_with_t: Vec<Cut> = (1u64..(1 << p))
            .filter(|bits| bits >> i & 1 == 1)
            .map(|bits| li.a_union(bits))
            .collect();
        let (t, x, y) = (li.t_cut(i), li.x_cut(i), li.y_cut(i));

        sole(&mut rep, &format!("t{sfx}x{sfx} is the only red link covering {{t{sfx}}}"), &li.red, gl.tx, &t);
        sole(&mut rep, &format!("a{sfx}y{sfx} is the only red link covering X{sfx}"), &li.red, gl.ay, &x);
        sole(&mut rep, &format!("y{sfx}r is the only red link covering Y{sfx}"), &li.red, gl.yr, &y);
        sole(&mut rep, &format!("t{sfx}b is the only blue link covering {{t{sfx}}}"), &li.blue, gl.tb, &t);

        crosses_all(&mut rep, &format!("t{sfx}x{sfx} covers every A-union containing t{sfx}"), gl.tx, &unions_with_t);
        crosses_all(&mut rep, &format!("y{sfx}r covers Y{sfx} and every small cut containing C"), gl.yr, &[vec![y.clone()], frc.clone()].concat());
        let mut tb_targets = vec![t, x, y];
        tb_targets.extend(unions_with_t);
        crosses_all(&mut rep, &format!("t{sfx}b covers {{t{sfx}}}, X{sfx}, Y{sfx} and A-unions containing t{sfx}"), gl.tb, &tb_targets);
    }
    sole(&mut rep, "rz is the only blue link covering V \\ {r}", &li.blue, li.rz, &all_not_r);
    crosses_all(&mut rep, "rz covers every small cut containing C", li.rz, &frc);
    rep.check(
        "small cuts containing C exist",
        !frc.is_empty(),
        format!("n = {n}"),
    );
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub q: u64,
    pub p: u64,
    pub k: u64,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    pub policy: String,
    pub selected: Vec<usize>,
    #[serde(serialize_with = "ser_rational")]
    pub alg_cost: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub opt_cost: Rational,
    /// True when `opt_cost` is the blue cost rather than an enumerated optimum.
    pub opt_analytic: bool,
    #[serde(serialize_with = "ser_rational")]
    pub dual_obj: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: Rational,
    pub checks: Vec<Check>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

impl GapReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `5p / (p + 2)`.
pub fn theorem_ratio(p: u64) -> Rational {
    rational::ratio(5 * p as i64, p as i64 + 2)
}

/// Runs the algorithm on a generated instance and compares it with the
/// optimum. The optimum is enumerated when the link count allows it;
/// otherwise the blue cost stands in and the report says so.
pub fn gap_experiment(li: &LabeledInstance, policy: TiePolicy, cfg: &OracleConfig) -> Result<GapReport> {
    let inst = &li.instance;
    let GadgetParams { q, p, k, .. } = li.params;
    let oracle = analytic_initial_cores(li, cfg.node_bound);
    let out = run(inst, &oracle, policy)?;
    let alg_cost = out.cost(inst);
    let dual_obj = dual_objective(&out.duals);

    let (opt_cost, opt_analytic) = if inst.links.len() <= cfg.link_bound {
        (brute_force_optimum(inst, cfg)?.cost, false)
    } else {
        (inst.cost_of(&li.blue), true)
    };
    if opt_cost.is_zero() {
        return Err(Error::Invariant("optimum cost is zero".into()));
    }
    let ratio = &alg_cost / &opt_cost;

    let mut checks = Report::new("");
    checks.check(
        "dual objective <= opt",
        dual_obj <= opt_cost,
        format!("{} > {}", rational::format(&dual_obj), rational::format(&opt_cost)),
    );
    checks.check(
        "cost <= 5 * dual objective",
        alg_cost <= rational::int(5) * &dual_obj,
        format!("{} vs {}", rational::format(&alg_cost), rational::format(&dual_obj)),
    );
    checks.check("duals are feasible", dual_feasible(inst, &out.duals)?, "");
    checks.check(
        "output is a minimal cover",
        is_minimal_cover(inst, &out.selected)?,
        "",
    );
    if policy == TiePolicy::AdversarialRedFirst {
        checks.check(
            "output is the red set",
            out.selected == li.red,
            format!("selected {:?}", out.selected),
        );
        if li.params.epsilon.is_zero() {
            checks.check(
                "ratio = 5p/(p+2)",
                ratio == theorem_ratio(p),
                format!("ratio {}", rational::format(&ratio)),
            );
        }
    }

    Ok(GapReport {
        q,
        p,
        k,
        epsilon: li.params.epsilon.clone(),
        policy: policy.name().into(),
        selected: out.selected,
        alg_cost,
        opt_cost,
        opt_analytic,
        dual_obj,
        ratio,
        checks: checks.checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub k: u64,
    pub p: u64,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub formula_value: Rational,
    pub opt_analytic: bool,
    pub matches: bool,
}

/// `5(k-1)/(k+3)` for odd `k`, `5(k-2)/(k+2)` for even `k`.
pub fn max_p_gap_formula(k: u64) -> Rational {
    let k = k as i64;
    if k % 2 == 1 {
        rational::ratio(5 * (k - 1), k + 3)
    } else {
        rational::ratio(5 * (k - 2), k + 2)
    }
}

/// For each `k`, runs the adversarial experiment at `q = 1` with the
/// largest admissible `p = ⌊(k-1)/2⌋` and compares against the closed form.
pub fn gap_sweep(ks: &[u64], cfg: &OracleConfig) -> Result<Vec<SweepRow>> {
    ks.iter()
        .map(|&k| {
            if k < 3 {
                return Err(Error::InvalidParams {
                    constraint: "k >= 3 for q = 1".into(),
                });
            }
            let p = (k - 1) / 2;
            let li = generate(&GadgetParams::exact(1, p, k)?)?;
            let rep = gap_experiment(&li, TiePolicy::AdversarialRedFirst, cfg)?;
            let formula_value = max_p_gap_formula(k);
            Ok(SweepRow {
                k,
                p,
                matches: rep.ratio == formula_value && rep.passed(),
                ratio: rep.ratio,
                formula_value,
                opt_analytic: rep.opt_analytic,
            })
        })
        .collect()
}
