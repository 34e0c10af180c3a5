use causal_horizon::gallery::flat::default_bounds;
use causal_horizon::gallery::{Flat, FlatKind};
use causal_horizon::tfae::{corpus, tfae_battery, TfaeConfig, TfaeSetup};

#[test]
fn every_item_agrees_on_the_corpus() {
    let cfg = TfaeConfig::default();
    let strip = Flat::new(FlatKind::Strip);
    let cyl = Flat::new(FlatKind::Cylinder);
    let s_setup = TfaeSetup::new(&strip, &default_bounds(FlatKind::Strip), &cfg).unwrap();
    let c_setup = TfaeSetup::new(&cyl, &default_bounds(FlatKind::Cylinder), &cfg).unwrap();
    let mut bad = Vec::new();
    for e in corpus() {
        let (o, s): (&Flat, &TfaeSetup) = if e.space == "strip" { (&strip, &s_setup) } else { (&cyl, &c_setup) };
        let rep = tfae_battery(o, &e.family, s, &cfg).unwrap();
        println!("{}: {:?}", e.family.name, rep.vector());
        for c in &rep.conditions {
            println!("  {} {:?} {}", c.item, c.verdict, c.detail);
        }
        if rep.agrees() != Some(e.converges) {
            bad.push(e.family.name.clone());
        }
    }
    assert!(bad.is_empty(), "{bad:?}");
}
