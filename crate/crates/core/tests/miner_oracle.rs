mod common;

use common::{check_miner_instance, random_miner_instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn matches_nested_loop_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..500 {
        let instance = random_miner_instance(&mut rng);
        check_miner_instance(&instance).unwrap_or_else(|e| panic!("instance {i}: {e}"));
    }
}
