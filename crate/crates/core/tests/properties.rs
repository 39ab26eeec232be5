#[allow(dead_code)]
mod props;

/// Case count, overridable with `DELTA_PROP_CASES`.
fn cases() -> u32 {
    std::env::var("DELTA_PROP_CASES")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000)
}

macro_rules! property {
    ($name:ident) => {
        #[test]
        fn $name() {
            props::$name(cases()).unwrap();
        }
    };
}

property!(ring_axioms);
property!(leibniz_and_commutation);
property!(ranking_axioms);
property!(pseudo_remainder_reduced);
property!(premultiplier_reconstruction);
property!(autoreduce_idempotent);
property!(parser_round_trip);
