#[path = "common/props.rs"]
mod props;

#[test]
fn leibniz_rule_on_random_products() {
    props::leibniz_rule_on_random_products().unwrap();
}

#[test]
fn commutator_is_a_derivation_given_by_composition() {
    props::commutator_is_a_derivation_given_by_composition().unwrap();
}

#[test]
fn exp_is_multiplicative_when_the_left_factor_pairs_evenly() {
    props::exp_is_multiplicative_when_the_left_factor_pairs_evenly().unwrap();
}

#[test]
fn exp_detects_an_oddly_pairing_left_factor() {
    props::exp_detects_an_oddly_pairing_left_factor().unwrap();
}

#[test]
fn convention_conversion_round_trips_and_intertwines() {
    props::convention_conversion_round_trips_and_intertwines().unwrap();
}
