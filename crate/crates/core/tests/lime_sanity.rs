mod common;

#[test]
fn constant_black_box_gets_no_weight() {
    let w = common::lime_constant_max_weight(20);
    assert!(w < 1e-3, "max |weight| {w}");
}

#[test]
fn single_bin_indicator_is_the_top_feature() {
    let hits = common::lime_indicator_hits(100);
    assert!(hits >= 95, "{hits}/100");
}
