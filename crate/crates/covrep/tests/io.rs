use covrep::commands::{run_instance, Command, RunReport, Theorem};
use covrep::io::{parse_instance, Instance, Loaded};
use covrep::random::{self, Profile};
use covrep_core::examples::{corpus_instance, corpus_names};
use covrep_core::linalg::{op_norm, DEFAULT_TOLERANCE};
use covrep_core::product::HypothesisMode;

fn named(name: &str) -> Instance {
    Instance::from_any(Some(name), &corpus_instance(name).unwrap())
}

#[test]
fn instances_round_trip_through_json() {
    for name in corpus_names() {
        let inst = named(&name);
        let text = inst.to_json();
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.to_json(), text, "{name}");
    }
}

#[test]
fn loaded_instance_reproduces_operators() {
    let inst = named("G2");
    let Loaded::Single { rep, .. } = inst.load(DEFAULT_TOLERANCE).unwrap() else { panic!("single rep") };
    let covrep_core::examples::AnyRep::Single(orig) = corpus_instance("G2").unwrap() else { panic!() };
    assert!(op_norm(&(rep.tilde() - orig.tilde())) < 1e-12);
}

#[test]
fn real_entries_parse_as_complex() {
    let text = named("scalar-unitary-3").to_json();
    let plain = text.replace("[0.0,0.0]", "0.0");
    assert_ne!(plain, text);
    let load = |t: &str| match parse_instance(t).unwrap().load(DEFAULT_TOLERANCE).unwrap() {
        Loaded::Single { rep, .. } => rep,
        _ => panic!("single rep"),
    };
    let (a, b) = (load(&plain), load(&text));
    assert_eq!(a.tilde(), b.tilde());
    assert_eq!(a.sigma().images(), b.sigma().images());
}

#[test]
fn reports_rerun_identically() {
    let commands = [
        Command::Validate,
        Command::Decompose,
        Command::Check { properties: vec!["concave".into(), "shimorin".into(), "analytic".into()] },
        Command::Verify { theorem: Theorem::Cd, mode: HypothesisMode::Direct, alpha: None },
    ];
    for seed in 0..5 {
        let covrep_core::examples::AnyRep::Single(rep) = random::random_instance(seed, Profile::Shimorin).unwrap() else {
            panic!()
        };
        let inst = Instance::from_rep(Some("shimorin"), &rep);
        for cmd in &commands {
            let first = run_instance(cmd, &inst, DEFAULT_TOLERANCE);
            let json = first.to_json();
            let parsed: RunReport = serde_json::from_str(&json).unwrap();
            assert_eq!(parsed.rerun().unwrap().to_json(), json);
        }
    }
}

#[test]
fn product_reports_rerun_identically() {
    let inst = named("jordan-pair");
    let cmd = Command::Verify { theorem: Theorem::T24, mode: HypothesisMode::Direct, alpha: None };
    let json = run_instance(&cmd, &inst, DEFAULT_TOLERANCE).to_json();
    let parsed: RunReport = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.rerun().unwrap().to_json(), json);
}
