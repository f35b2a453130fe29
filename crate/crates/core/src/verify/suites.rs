//! The individual suites. Each trial returns deviations in the order of its
//! suite's equation list.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::gen;
use super::{EquationDef, TrialOutput, Witness, WitnessDef};
use crate::classical::semiexp::{eta_image, Abstraction};
use crate::classical::{self, Dist, FinSet, Space, StochChannel};
use crate::correspond::{self, JointQState};
use crate::error::Result;
use crate::matkernel::{DimList, C64};
use crate::quantum::{hat_channel, hat_effect, hat_state, Effect, QState};

use super::Suite;

type TrialFn = Box<dyn Fn(usize, &mut ChaCha8Rng) -> Result<TrialOutput> + Send + Sync>;

pub(crate) struct Plan {
    pub equations: Vec<EquationDef>,
    pub witnesses: Vec<WitnessDef>,
    pub fixed_witnesses: Vec<Witness>,
    pub dims: Vec<usize>,
    pub trial: TrialFn,
}

/// Gap an inequality witness must exceed.
pub const WITNESS_THRESHOLD: f64 = 0.01;

fn labelled(n: usize) -> Space {
    Space::single(FinSet::range(n).expect("positive size"))
}

fn dl(n: usize) -> DimList {
    DimList::single(n).expect("positive size")
}

fn equations_only(deviations: Vec<f64>) -> TrialOutput {
    TrialOutput {
        deviations: deviations.into_iter().map(Some).collect(),
        candidates: Vec::new(),
    }
}

pub(crate) fn plan(suite: Suite, dims: (usize, usize)) -> Plan {
    let (n, m) = dims;
    match suite {
        Suite::ClassicalBayes => Plan {
            equations: vec![
                ("product rule", 1e-12),
                ("Bayes rule", 1e-12),
                ("successive conditioning", 1e-12),
                ("commuting conditioning", 1e-12),
                ("validity duality", 1e-12),
                ("forward inference", 1e-12),
                ("backward inference", 1e-12),
            ],
            witnesses: vec![],
            fixed_witnesses: vec![],
            dims: vec![4, 5, 6],
            trial: Box::new(|_, rng| classical_bayes(rng)),
        },
        Suite::Semiexp => Plan {
            equations: vec![
                ("beta law", 1e-12),
                ("naturality", 1e-12),
                ("eta law on uniform first marginals", 1e-12),
            ],
            witnesses: vec![("eta law violation", WITNESS_THRESHOLD)],
            fixed_witnesses: vec![],
            dims: vec![2, 3, 4],
            trial: Box::new(|_, rng| semiexp(rng)),
        },
        Suite::QuantumBayes => Plan {
            equations: vec![
                ("product rule (lower)", 1e-10),
                ("Bayes rule (upper)", 1e-10),
            ],
            witnesses: vec![],
            fixed_witnesses: vec![],
            dims: vec![2, 3, 4],
            trial: Box::new(|t, rng| quantum_bayes(2 + t % 3, rng)),
        },
        Suite::QuantumDuality => Plan {
            equations: vec![
                ("validity duality", 1e-10),
                ("state transform of a composite", 1e-10),
                ("predicate transform of a composite", 1e-10),
            ],
            witnesses: vec![],
            fixed_witnesses: vec![],
            dims: vec![n, m],
            trial: Box::new(move |_, rng| quantum_duality(n, m, rng)),
        },
        Suite::PairExtract => Plan {
            equations: vec![
                ("proj after pair", 1e-9),
                ("extract after pair", 1e-9),
                ("pair after proj and extract", 1e-9),
                ("second marginal via extract", 1e-9),
                ("pairing two paths", 1e-10),
            ],
            witnesses: vec![],
            fixed_witnesses: vec![],
            dims: vec![n, m],
            trial: Box::new(move |_, rng| pair_extract(n, m, rng)),
        },
        Suite::Inference => Plan {
            equations: vec![("forward inference", 1e-9), ("backward inference", 1e-9)],
            witnesses: vec![],
            fixed_witnesses: vec![],
            dims: vec![n, m],
            trial: Box::new(move |_, rng| inference(n, m, rng)),
        },
        Suite::Witnesses => Plan {
            equations: vec![("fixed witness distance is one", 1e-10)],
            witnesses: vec![
                ("lower conditionings do not commute", WITNESS_THRESHOLD),
                ("upper conditionings do not commute", WITNESS_THRESHOLD),
                ("lower conditionings do not reduce to &", WITNESS_THRESHOLD),
                ("upper conditionings do not reduce to &", WITNESS_THRESHOLD),
            ],
            fixed_witnesses: fixed_witnesses(),
            dims: vec![2],
            trial: Box::new(|_, rng| witnesses(rng)),
        },
        Suite::Embedding => Plan {
            equations: [
                "validity",
                "sequential conjunction",
                "lower conditioning",
                "upper conditioning",
                "state transform",
                "predicate transform",
                "pair",
                "proj",
                "extract",
                "forward crossover",
                "forward inference",
                "backward crossover",
                "backward inference",
            ]
            .into_iter()
            .map(|name| (name, 1e-10))
            .collect(),
            witnesses: vec![],
            fixed_witnesses: vec![],
            dims: vec![2, 3, 4],
            trial: Box::new(|_, rng| embedding(rng)),
        },
    }
}

fn classical_bayes(rng: &mut ChaCha8Rng) -> Result<TrialOutput> {
    let x = labelled(rng.random_range(4..=6));
    let y = labelled(rng.random_range(4..=6));
    let omega = gen::random_dist(&x, rng);
    let p = gen::random_fuzzy_pred(&x, rng);
    let q = gen::random_fuzzy_pred(&x, rng);
    let c = gen::random_stoch_channel(&x, &y, rng);
    let r = gen::random_fuzzy_pred(&y, rng);
    let tau = gen::random_dist(&x.product(&y), rng);

    let wp = omega.validity(&p)?;
    let wq = omega.validity(&q)?;
    let given_p = omega.condition(&p)?;
    let given_q = omega.condition(&q)?;
    let pq = p.and_then(&q)?;
    let product = (given_p.validity(&q)? * wp - omega.validity(&pq)?).abs();
    let bayes = (given_p.validity(&q)? * wp - given_q.validity(&p)? * wq).abs();
    let successive = given_p.condition(&q)?.max_deviation(&omega.condition(&pq)?);
    let commuting = given_p
        .condition(&q)?
        .max_deviation(&given_q.condition(&p)?);
    let duality = (c.push(&omega)?.validity(&r)? - omega.validity(&c.pull(&r)?)?).abs();

    let m1 = tau.marginal(&[true, false])?;
    let e = tau.extract()?;
    let lhs = tau.condition(&p.tensor(&classical::FuzzyPred::truth(y.clone())))?;
    let forward = lhs
        .marginal(&[false, true])?
        .max_deviation(&e.push(&m1.condition(&p)?)?);
    let lhs = tau.condition(&classical::FuzzyPred::truth(x).tensor(&r))?;
    let backward = lhs
        .marginal(&[true, false])?
        .max_deviation(&m1.condition(&e.pull(&r)?)?);

    Ok(equations_only(vec![
        product, bayes, successive, commuting, duality, forward, backward,
    ]))
}

fn semiexp(rng: &mut ChaCha8Rng) -> Result<TrialOutput> {
    let mut size = |tag: &str| {
        let n = rng.random_range(2..=4);
        Space::single(FinSet::new((0..n).map(|i| format!("{tag}{i}"))).expect("distinct labels"))
    };
    let (w, z, x, y) = (size("w"), size("z"), size("x"), size("y"));
    let f = gen::random_stoch_channel(&z.product(&x), &y, rng);
    let g = gen::random_stoch_channel(&w, &z, rng);

    let lam = Abstraction::new(&f, 1)?;
    let beta = lam.evaluate()?.max_deviation(&f);

    let g_id = g.tensor(&StochChannel::identity(x.clone()));
    let lhs = Abstraction::new(&f.after(&g_id)?, 1)?;
    let rhs = lam.after(&g)?;
    let naturality = lhs
        .joints()
        .iter()
        .zip(&rhs)
        .map(|(a, b)| a.max_deviation(b))
        .fold(0.0, f64::max);

    let c = gen::random_stoch_channel(&x, &y, rng);
    let uniform_joint = classical::pair(&Dist::uniform(x.clone()), &c)?;
    let eta_uniform = eta_image(&uniform_joint, 1)?.max_deviation(&uniform_joint);

    let tau = gen::random_dist(&x.product(&y), rng);
    let gap = eta_image(&tau, 1)?.max_deviation(&tau);

    Ok(TrialOutput {
        deviations: vec![Some(beta), Some(naturality), Some(eta_uniform)],
        candidates: vec![(gap, json!({ "tau": tau }))],
    })
}

fn quantum_bayes(n: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutput> {
    let dims = dl(n);
    let s = gen::random_qstate(&dims, rng);
    let p = gen::random_effect(&dims, rng);
    let q = gen::random_effect(&dims, rng);
    let sp = s.validity(&p)?;
    let sq = s.validity(&q)?;
    let product = (s.cond_lower(&p)?.validity(&q)? * sp - s.validity(&p.and_then(&q)?)?).abs();
    let bayes = (s.cond_upper(&p)?.validity(&q)? * sp - s.cond_upper(&q)?.validity(&p)? * sq).abs();
    Ok(equations_only(vec![product, bayes]))
}

fn quantum_duality(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutput> {
    let (h, k) = (dl(n), dl(m));
    let c = gen::random_qchannel(&h, &k, rng);
    let d = gen::random_qchannel(&k, &h, rng);
    let s = gen::random_qstate(&h, rng);
    let q = gen::random_effect(&k, rng);
    let r = gen::random_effect(&h, rng);
    let duality = (c.push(&s)?.validity(&q)? - s.validity(&c.pull(&q)?)?).abs();
    let both = d.after(&c)?;
    let states = both.push(&s)?.dist(&d.push(&c.push(&s)?)?);
    let preds = both.pull(&r)?.dist(&c.pull(&d.pull(&r)?)?);
    Ok(equations_only(vec![duality, states, preds]))
}

fn pair_extract(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutput> {
    let sigma = gen::random_qstate(&dl(n), rng);
    let c = gen::random_qchannel(&dl(n), &dl(m), rng);
    let tau = JointQState::new(gen::random_qstate(&DimList::new(vec![n, m])?, rng))?;

    let paired = correspond::pair(&sigma, &c)?;
    let proj_pair = correspond::proj(&paired).dist(&sigma);
    let extract_pair = correspond::extract(&paired)?.dist(&c);
    let r = correspond::recover(&tau)?;
    let round_trip = correspond::pair(&r.state, &r.channel)?.dist(&tau);
    let second = r.second.dist(&tau.second_marginal());
    let two_paths = paired.dist(&correspond::pair_via_cup(&sigma, &c)?);
    Ok(equations_only(vec![
        proj_pair,
        extract_pair,
        round_trip,
        second,
        two_paths,
    ]))
}

fn inference(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutput> {
    let tau = JointQState::new(gen::random_qstate(&DimList::new(vec![n, m])?, rng))?;
    let p = gen::random_effect(&dl(n), rng);
    let q = gen::random_effect(&dl(m), rng);
    let forward =
        correspond::crossover_second(&tau, &p)?.dist(&correspond::inference_forward(&tau, &p)?);
    let backward =
        correspond::crossover_first(&tau, &q)?.dist(&correspond::inference_backward(&tau, &q)?);
    Ok(equations_only(vec![forward, backward]))
}

/// `σ = I/2`, `p = |0><0|`, `q = |+><+|`.
pub fn fixed_witness_inputs() -> (QState, Effect, Effect) {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    (
        QState::maximally_mixed(dl(2)),
        Effect::projector(&[one, zero]).expect("unit vector"),
        Effect::projector(&[one, one]).expect("nonzero vector"),
    )
}

/// Distances `‖(σ|p)|q − (σ|q)|p‖` for lower and upper conditioning.
fn commutation_gaps(s: &QState, p: &Effect, q: &Effect) -> Result<(f64, f64)> {
    let lower = s
        .cond_lower(p)?
        .cond_lower(q)?
        .dist(&s.cond_lower(q)?.cond_lower(p)?);
    let upper = s
        .cond_upper(p)?
        .cond_upper(q)?
        .dist(&s.cond_upper(q)?.cond_upper(p)?);
    Ok((lower, upper))
}

fn fixed_witnesses() -> Vec<Witness> {
    let (s, p, q) = fixed_witness_inputs();
    let (lower, upper) = commutation_gaps(&s, &p, &q).expect("fixed witness is well defined");
    let inputs = json!({ "sigma": s, "p": p, "q": q });
    [
        ("fixed: lower conditionings do not commute", lower),
        ("fixed: upper conditionings do not commute", upper),
    ]
    .into_iter()
    .map(|(name, deviation)| Witness {
        name: name.to_string(),
        deviation,
        threshold: WITNESS_THRESHOLD,
        found: deviation > WITNESS_THRESHOLD,
        trial: None,
        inputs: inputs.clone(),
    })
    .collect()
}

fn witnesses(rng: &mut ChaCha8Rng) -> Result<TrialOutput> {
    let (fs, fp, fq) = fixed_witness_inputs();
    let fixed = (commutation_gaps(&fs, &fp, &fq)?.0 - 1.0).abs();

    let dims = dl(2);
    let s = gen::random_qstate(&dims, rng);
    let p = gen::random_effect(&dims, rng);
    let q = gen::random_effect(&dims, rng);
    let (lower, upper) = commutation_gaps(&s, &p, &q)?;
    let pq = p.and_then(&q)?;
    let lower_reduce = s.cond_lower(&p)?.cond_lower(&q)?.dist(&s.cond_lower(&pq)?);
    let upper_reduce = s.cond_upper(&p)?.cond_upper(&q)?.dist(&s.cond_upper(&pq)?);
    let inputs = json!({ "sigma": s, "p": p, "q": q });
    Ok(TrialOutput {
        deviations: vec![Some(fixed)],
        candidates: vec![
            (lower, inputs.clone()),
            (upper, inputs.clone()),
            (lower_reduce, inputs.clone()),
            (upper_reduce, inputs),
        ],
    })
}

fn embedding(rng: &mut ChaCha8Rng) -> Result<TrialOutput> {
    let x = labelled(rng.random_range(2..=4));
    let y = labelled(rng.random_range(2..=4));
    let omega = gen::random_dist(&x, rng);
    let p = gen::random_fuzzy_pred(&x, rng);
    let q = gen::random_fuzzy_pred(&x, rng);
    let c = gen::random_stoch_channel(&x, &y, rng);
    let r = gen::random_fuzzy_pred(&y, rng);
    let joint = gen::random_dist(&x.product(&y), rng);

    let (hw, hp, hq, hc, hr) = (
        hat_state(&omega),
        hat_effect(&p),
        hat_effect(&q),
        hat_channel(&c),
        hat_effect(&r),
    );
    let validity = (hw.validity(&hp)? - omega.validity(&p)?).abs();
    let conj = hp.and_then(&hq)?.dist(&hat_effect(&p.and_then(&q)?));
    let cond = hat_state(&omega.condition(&p)?);
    let lower = hw.cond_lower(&hp)?.dist(&cond);
    let upper = hw.cond_upper(&hp)?.dist(&cond);
    let push = hc.push(&hw)?.dist(&hat_state(&c.push(&omega)?));
    let pull = hc.pull(&hr)?.dist(&hat_effect(&c.pull(&r)?));
    let pair = correspond::pair(&hw, &hc)?
        .state()
        .dist(&hat_state(&classical::pair(&omega, &c)?));

    let tau = JointQState::new(hat_state(&joint))?;
    let m1 = joint.marginal(&[true, false])?;
    let e = joint.extract()?;
    let proj = correspond::proj(&tau).dist(&hat_state(&m1));
    let extract = correspond::extract(&tau)?.dist(&hat_channel(&e));
    let forward = hat_state(&e.push(&m1.condition(&p)?)?);
    let fwd_cross = correspond::crossover_second(&tau, &hp)?.dist(&forward);
    let fwd_inf = correspond::inference_forward(&tau, &hp)?.dist(&forward);
    let backward = hat_state(&m1.condition(&e.pull(&r)?)?);
    let bwd_cross = correspond::crossover_first(&tau, &hr)?.dist(&backward);
    let bwd_inf = correspond::inference_backward(&tau, &hr)?.dist(&backward);

    Ok(equations_only(vec![
        validity, conj, lower, upper, push, pull, pair, proj, extract, fwd_cross, fwd_inf,
        bwd_cross, bwd_inf,
    ]))
}
