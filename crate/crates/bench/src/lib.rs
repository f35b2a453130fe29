//! Seeded inputs shared by the benchmarks.

use qbayes_core::verify::gen;
use qbayes_core::{DimList, Effect, JointQState, QState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub joint: JointQState,
    pub sigma: QState,
    pub p: Effect,
    pub q: Effect,
}

/// A full-rank joint state on `n ⊗ m` with evidence for both sides.
pub fn fixture(n: usize, m: usize, seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = DimList::new(vec![n, m]).expect("positive dims");
    let joint = JointQState::new(gen::random_qstate(&dims, &mut rng)).expect("two components");
    let first = DimList::single(n).expect("positive dims");
    let second = DimList::single(m).expect("positive dims");
    Fixture {
        joint,
        sigma: gen::random_qstate(&first, &mut rng),
        p: gen::random_effect(&first, &mut rng),
        q: gen::random_effect(&second, &mut rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_deterministic() {
        let a = fixture(3, 5, 1);
        let b = fixture(3, 5, 1);
        assert_eq!(a.joint, b.joint);
        assert_eq!(a.joint.split(), (3, 5));
        assert_eq!(a.q.dim(), 5);
    }
}
