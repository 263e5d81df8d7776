use commfam::argshift::{classical_invariants, InvariantSet, InvariantSource};
use commfam::config::RunConfig;
use commfam::exact::{parse_poly, Poly};
use commfam::liealg::{catalog, from_json_str, heisenberg_in, to_json_string};
use commfam::pipeline::{construct, fingerprint, verify, Verdict};
use commfam::poisson::{PolyFamily, Provenance};
use commfam::reduction::{heis_assemble, heis_reduce, ReductionState};

#[test]
fn oscillator_assembly() {
    let g = catalog("oscillator", 4).unwrap();
    let n = g.nilradical().unwrap();
    let hb = heisenberg_in(&g, &n).unwrap();
    let red = heis_reduce(&ReductionState::new(g.clone()), &hb).unwrap();
    let sub = PolyFamily::from_members(vec![Poly::coord(0)], Provenance::Coordinate);
    let fam = heis_assemble(&red, &sub);
    assert_eq!(fam.len(), 3);
    assert_eq!(
        fam.provenance(),
        &[
            Provenance::HeisLift,
            Provenance::VplusBasis,
            Provenance::VplusBasis
        ]
    );
    let cert = verify(&g, fam, &RunConfig::default()).unwrap();
    assert_eq!(cert.verdict, Verdict::Complete);
}

#[test]
fn filiform_and_heis5() {
    for (name, size, l) in [
        ("filiform", 4, 3),
        ("filiform", 5, 4),
        ("heis", 5, 3),
        ("strictly_upper", 3, 2),
    ] {
        let g = catalog(name, size).unwrap();
        let cert = construct(&g, None, &RunConfig::default()).unwrap();
        assert_eq!(cert.target_l, l, "{name}{size}");
        assert_eq!(cert.verdict, Verdict::Complete, "{name}{size}");
        assert!(cert
            .trace
            .windows(1)
            .all(|s| s[0].dim_after < s[0].dim_before));
    }
}

#[test]
fn parametrized_json_algebra() {
    // d acts on (a, b) with weights 1 and t1
    let src = r#"{
        "dim": 3,
        "basis": ["d", "a", "b"],
        "params": ["t1"],
        "brackets": [
            {"i": 0, "j": 1, "result": {"1": "1"}},
            {"i": 0, "j": 2, "result": {"2": "t1"}}
        ]
    }"#;
    let (g, inv) = from_json_str(src).unwrap();
    assert!(inv.is_none());
    assert_eq!(g.params(), &[1]);
    let cert = construct(&g, None, &RunConfig::default()).unwrap();
    assert_eq!(cert.verdict, Verdict::Complete, "{}", cert.to_json_string());
}

#[test]
fn user_invariants_from_json() {
    let g = catalog("sl", 2).unwrap();
    let inv = classical_invariants("sl", 2).unwrap();
    let text = to_json_string(&g, Some(&inv.generators));
    let (back, gens) = from_json_str(&text).unwrap();
    let user = InvariantSet::verified(&back, gens.unwrap(), InvariantSource::UserSupplied).unwrap();
    let cert = construct(&back, Some(&user), &RunConfig::default()).unwrap();
    assert_eq!(cert.verdict, Verdict::Complete);
    assert_eq!(cert.fingerprint, fingerprint(&g));
}

#[test]
fn seeds_change_samples_not_verdicts() {
    let g = catalog("strictly_upper", 4).unwrap();
    let a = construct(
        &g,
        None,
        &RunConfig {
            seed: 1,
            ..RunConfig::default()
        },
    )
    .unwrap();
    let b = construct(
        &g,
        None,
        &RunConfig {
            seed: 2,
            ..RunConfig::default()
        },
    )
    .unwrap();
    assert_eq!(a.verdict, b.verdict);
    assert_ne!(a.independence.points, b.independence.points);
    assert_eq!(a.family, b.family);
}

#[test]
fn certificate_json_shape() {
    let g = catalog("borel_sl2", 2).unwrap();
    let cert = construct(&g, None, &RunConfig::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&cert.to_json_string()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["target_l"], 1);
    assert_eq!(v["family"][0]["provenance"], "h_basis");
    assert_eq!(v["trace"][0]["step"], "com");
    assert_eq!(v["verdict"], "complete");
    let e = parse_poly("e", g.labels()).unwrap();
    assert_eq!(cert.members.members(), &[e]);
}
