use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::verify::gen;

fn smoking() -> Dist {
    Dist::new(Space::boolean(), vec![0.3, 0.7]).unwrap()
}

fn ashtray_likelihood() -> FuzzyPred {
    FuzzyPred::new(Space::boolean(), vec![0.95, 0.25]).unwrap()
}

fn cancer() -> StochChannel {
    StochChannel::from_truth_probs(Space::boolean(), &[0.4, 0.05]).unwrap()
}

fn labelled(n: usize) -> Space {
    Space::single(FinSet::range(n).unwrap())
}

#[test]
fn fin_set_validation() {
    assert!(FinSet::new(Vec::<String>::new()).is_err());
    assert!(FinSet::new(["a", "a"]).is_err());
    assert!(Space::new(vec![]).is_err());
}

#[test]
fn dist_validation() {
    assert!(Dist::new(Space::boolean(), vec![0.5, 0.6]).is_err());
    assert!(Dist::new(Space::boolean(), vec![1.0]).is_err());
    assert!(Dist::new(Space::boolean(), vec![1.0 + 1e-6, -1e-6]).is_err());
    let d = Dist::new(Space::boolean(), vec![1.0 + 5e-13, -5e-13]).unwrap();
    assert_eq!(d.probs()[1], 0.0);
    assert!(FuzzyPred::new(Space::boolean(), vec![1.1, 0.0]).is_err());
    let p = FuzzyPred::new(Space::boolean(), vec![1.0 + 5e-13, -5e-13]).unwrap();
    assert_eq!(p.values(), &[1.0, 0.0]);
}

#[test]
fn validity_of_smoking_evidence() {
    let v = smoking().validity(&ashtray_likelihood()).unwrap();
    assert!((v - 0.46).abs() < 1e-15);
    assert!(
        (smoking()
            .validity(&FuzzyPred::truth(Space::boolean()))
            .unwrap()
            - 1.0)
            .abs()
            < 1e-15
    );
}

#[test]
fn validity_matches_summation_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let space = labelled(6);
    let omega = gen::random_dist(&space, &mut rng);
    let p = gen::random_fuzzy_pred(&space, &mut rng);
    let mut expected = 0.0;
    for i in 0..6 {
        expected += omega.probs()[i] * p.values()[i];
    }
    assert!((omega.validity(&p).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn space_mismatch_is_an_error() {
    let p = FuzzyPred::truth(labelled(3));
    assert!(matches!(
        smoking().validity(&p),
        Err(Error::SpaceMismatch(_))
    ));
    assert!(matches!(
        ashtray_likelihood().and_then(&p),
        Err(Error::SpaceMismatch(_))
    ));
    assert!(cancer().push(&Dist::uniform(labelled(3))).is_err());
}

#[test]
fn conditioning_on_ashtray_evidence() {
    let post = smoking().condition(&ashtray_likelihood()).unwrap();
    assert!((post.probs()[0] - 0.285 / 0.46).abs() < 1e-12);
    assert!((post.probs()[1] - 0.175 / 0.46).abs() < 1e-12);
    assert!((post.probs()[0] - 0.6196).abs() < 1e-4);
}

#[test]
fn conditioning_with_truth_does_nothing() {
    let d = smoking()
        .condition(&FuzzyPred::truth(Space::boolean()))
        .unwrap();
    assert!(d.max_deviation(&smoking()) < 1e-15);
}

#[test]
fn conditioning_on_zero_validity_fails() {
    let d = Dist::new(Space::boolean(), vec![1.0, 0.0]).unwrap();
    let p = FuzzyPred::new(Space::boolean(), vec![0.0, 1.0]).unwrap();
    assert!(matches!(d.condition(&p), Err(Error::ZeroValidity(_))));
}

#[test]
fn successive_conditioning_reduces() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let space = labelled(5);
    for _ in 0..20 {
        let omega = gen::random_dist(&space, &mut rng);
        let p = gen::random_fuzzy_pred(&space, &mut rng);
        let q = gen::random_fuzzy_pred(&space, &mut rng);
        let twice = omega.condition(&p).unwrap().condition(&q).unwrap();
        let once = omega.condition(&p.and_then(&q).unwrap()).unwrap();
        assert!(twice.max_deviation(&once) < 1e-12);
    }
}

#[test]
fn conjunction_and_tensor() {
    let p = ashtray_likelihood();
    assert_eq!(p.and_then(&FuzzyPred::truth(Space::boolean())).unwrap(), p);

    let w1 = smoking();
    let w2 = Dist::on(["a", "b", "c"], vec![0.2, 0.3, 0.5]).unwrap();
    let joint = w1.tensor(&w2);
    assert!(joint.marginal(&[true, false]).unwrap().max_deviation(&w1) < 1e-15);
    assert!(joint.marginal(&[false, true]).unwrap().max_deviation(&w2) < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = gen::random_fuzzy_pred(&labelled(3), &mut rng);
    let q = gen::random_fuzzy_pred(&labelled(4), &mut rng);
    let pq = p.tensor(&q);
    for x in 0..3 {
        for y in 0..4 {
            let expected = p.values()[x] * q.values()[y];
            assert!((pq.values()[x * 4 + y] - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn cancer_prior() {
    let prior = cancer().push(&smoking()).unwrap();
    assert!((prior.probs()[0] - 0.155).abs() < 1e-12);
    assert!((prior.probs()[1] - 0.845).abs() < 1e-12);
}

#[test]
fn identity_channel_transforms_nothing() {
    let id = StochChannel::identity(Space::boolean());
    assert!(id.push(&smoking()).unwrap().max_deviation(&smoking()) < 1e-15);
    assert_eq!(cancer().after(&id).unwrap(), cancer());
    assert_eq!(id.after(&cancer()).unwrap(), cancer());
}

#[test]
fn channel_validation() {
    assert!(StochChannel::new(
        Space::boolean(),
        Space::boolean(),
        vec![vec![0.5, 0.6], vec![1.0, 0.0]]
    )
    .is_err());
    assert!(StochChannel::new(Space::boolean(), Space::boolean(), vec![vec![1.0, 0.0]]).is_err());
    assert!(StochChannel::copy(Space::boolean(), 0).is_err());
}

#[test]
fn validity_duality_and_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (x, y, z) = (labelled(4), labelled(5), labelled(3));
    for _ in 0..20 {
        let c = gen::random_stoch_channel(&x, &y, &mut rng);
        let d = gen::random_stoch_channel(&y, &z, &mut rng);
        let omega = gen::random_dist(&x, &mut rng);
        let q = gen::random_fuzzy_pred(&y, &mut rng);
        let r = gen::random_fuzzy_pred(&z, &mut rng);

        let lhs = c.push(&omega).unwrap().validity(&q).unwrap();
        let rhs = omega.validity(&c.pull(&q).unwrap()).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);

        let dc = d.after(&c).unwrap();
        let two_step = d.push(&c.push(&omega).unwrap()).unwrap();
        assert!(dc.push(&omega).unwrap().max_deviation(&two_step) < 1e-12);
        let back = c.pull(&d.pull(&r).unwrap()).unwrap();
        assert!(dc.pull(&r).unwrap().max_deviation(&back) < 1e-12);
        for row in dc.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn pairing_smoking_with_cancer() {
    let joint = pair(&smoking(), &cancer()).unwrap();
    let expected = [0.12, 0.18, 0.035, 0.665];
    assert!(max_abs_diff(joint.probs(), &expected) < 1e-12);
    assert_eq!(joint.space().arity(), 2);
    assert!(
        joint
            .marginal(&[true, false])
            .unwrap()
            .max_deviation(&smoking())
            < 1e-15
    );
}

#[test]
fn pairing_with_constant_channel_is_product() {
    let rho = Dist::on(["a", "b", "c"], vec![0.2, 0.3, 0.5]).unwrap();
    let c = StochChannel::constant(Space::boolean(), &rho);
    let joint = pair(&smoking(), &c).unwrap();
    assert!(joint.max_deviation(&smoking().tensor(&rho)) < 1e-15);
}

#[test]
fn three_way_tupling() {
    let ashtray = StochChannel::from_truth_probs(Space::boolean(), &[0.95, 0.25]).unwrap();
    let id = StochChannel::identity(Space::boolean());
    let joint = StochChannel::tuple(&[&ashtray, &id, &cancer()])
        .unwrap()
        .push(&smoking())
        .unwrap();
    assert_eq!(joint.space().arity(), 3);
    assert!((joint.prob(&["t", "t", "t"]).unwrap() - 0.114).abs() < 1e-12);
    assert!((joint.prob(&["t", "t", "f"]).unwrap() - 0.171).abs() < 1e-12);
    let m1 = joint.marginal(&[true, false, false]).unwrap();
    assert!((m1.probs()[0] - 0.46).abs() < 1e-12);
    let m3 = joint.marginal(&[false, false, true]).unwrap();
    assert!((m3.probs()[0] - 0.155).abs() < 1e-12);
    assert_eq!(joint.marginal(&[true, true, true]).unwrap(), joint);
    assert!(matches!(
        joint.marginal(&[true, false]),
        Err(Error::Dimension(_))
    ));
    assert!(joint.marginal(&[false, false, false]).is_err());
}

#[test]
fn extraction_recovers_the_table() {
    let joint = pair(&smoking(), &cancer()).unwrap();
    let e = joint.extract().unwrap();
    assert!(e.max_deviation(&cancer()) < 1e-12);
    assert!((e.row(0)[0] - 0.4).abs() < 1e-12);
    assert!((e.row(1)[0] - 0.05).abs() < 1e-12);

    let rho = Dist::on(["a", "b", "c"], vec![0.2, 0.3, 0.5]).unwrap();
    let e = smoking().tensor(&rho).extract().unwrap();
    assert!(e.max_deviation(&StochChannel::constant(Space::boolean(), &rho)) < 1e-15);
}

#[test]
fn extraction_needs_full_support() {
    let omega = Dist::new(Space::boolean(), vec![1.0, 0.0]).unwrap();
    let joint = pair(&omega, &cancer()).unwrap();
    match joint.extract() {
        Err(Error::Support { label }) => assert_eq!(label, "f"),
        other => panic!("expected a support error, got {other:?}"),
    }
}

#[test]
fn disintegration_is_unique() {
    // Any d with pair(M1 τ, d) = τ must satisfy M1(τ)(x)·d(x)(y) = τ(x,y);
    // solve those equations row by row and compare.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tau = gen::random_dist(&labelled(3).product(&labelled(4)), &mut rng);
    let m1 = tau.marginal(&[true, false]).unwrap();
    let e = tau.extract().unwrap();
    for x in 0..3 {
        for y in 0..4 {
            let solved = tau.probs()[x * 4 + y] / m1.probs()[x];
            assert!((e.row(x)[y] - solved).abs() < 1e-12);
        }
    }
}

#[test]
fn display_matches_listing_style() {
    assert_eq!(smoking().to_string(), "0.3|t> + 0.7|f>");
    let post = cancer()
        .push(&smoking().condition(&ashtray_likelihood()).unwrap())
        .unwrap();
    assert_eq!(post.to_string(), "0.267|t> + 0.733|f>");
    assert_eq!(format_prob(0.00875, 3), "0.00875");
    assert_eq!(format_prob(0.46, 3), "0.46");
    assert_eq!(format_prob(1.0, 3), "1");
}

#[test]
fn json_forms() {
    let joint = pair(&smoking(), &cancer()).unwrap();
    let v = serde_json::to_value(&joint).unwrap();
    assert_eq!(v["labels"][1], serde_json::json!(["t", "f"]));
    let back: Dist = serde_json::from_value(v).unwrap();
    assert_eq!(back, joint);

    let c: StochChannel = serde_json::from_value(serde_json::json!({
        "dom": ["t", "f"], "cod": ["t", "f"], "rows": [[0.4, 0.6], [0.05, 0.95]]
    }))
    .unwrap();
    assert!(c.max_deviation(&cancer()) < 1e-15);
    let back: StochChannel = serde_json::from_value(serde_json::to_value(&c).unwrap()).unwrap();
    assert_eq!(back, c);

    let out_of_order = serde_json::json!({
        "labels": [["t","f"], ["t","t"], ["f","t"], ["f","f"]], "probs": [0.25, 0.25, 0.25, 0.25]
    });
    assert!(serde_json::from_value::<Dist>(out_of_order).is_err());
    let unnormalized = serde_json::json!({"labels": ["a", "b"], "probs": [0.5, 0.6]});
    assert!(serde_json::from_value::<Dist>(unnormalized).is_err());
}

fn arb_joint() -> impl Strategy<Value = Dist> {
    (any::<u64>(), 2usize..5, 2usize..5).prop_map(|(seed, n, m)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        gen::random_dist(&labelled(n).product(&labelled(m)), &mut rng)
    })
}

proptest! {
    #[test]
    fn pair_extract_round_trip(tau in arb_joint()) {
        let m1 = tau.marginal(&[true, false]).unwrap();
        let rebuilt = pair(&m1, &tau.extract().unwrap()).unwrap();
        prop_assert!(rebuilt.max_deviation(&tau) < 1e-12);
    }

    #[test]
    fn crossover_equals_inference(tau in arb_joint(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = tau.space().slice(0, 1).unwrap();
        let y = tau.space().slice(1, 2).unwrap();
        let p = gen::random_fuzzy_pred(&x, &mut rng);
        let q = gen::random_fuzzy_pred(&y, &mut rng);
        let c = tau.extract().unwrap();
        let m1 = tau.marginal(&[true, false]).unwrap();

        let crossover = tau.condition(&p.tensor(&FuzzyPred::truth(y.clone()))).unwrap()
            .marginal(&[false, true]).unwrap();
        let forward = c.push(&m1.condition(&p).unwrap()).unwrap();
        prop_assert!(crossover.max_deviation(&forward) < 1e-12);

        let crossover = tau.condition(&FuzzyPred::truth(x).tensor(&q)).unwrap()
            .marginal(&[true, false]).unwrap();
        let backward = m1.condition(&c.pull(&q).unwrap()).unwrap();
        prop_assert!(crossover.max_deviation(&backward) < 1e-12);
    }

    #[test]
    fn conditioning_commutes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..7);
        let space = labelled(n);
        let omega = gen::random_dist(&space, &mut rng);
        let p = gen::random_fuzzy_pred(&space, &mut rng);
        let q = gen::random_fuzzy_pred(&space, &mut rng);
        let pq = omega.condition(&p).unwrap().condition(&q).unwrap();
        let qp = omega.condition(&q).unwrap().condition(&p).unwrap();
        prop_assert!(pq.max_deviation(&qp) < 1e-12);
    }
}
