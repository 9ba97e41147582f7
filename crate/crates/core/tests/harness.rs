use gspin6::harness::{self, fixture, ConfigError, HarnessError, Record, Report, RunConfig, RunOutput, Subcommand, FIXTURES};
use proptest::prelude::*;
use serde_json::{json, Value};

fn cfg(text: &str) -> RunConfig {
    RunConfig::parse(text).unwrap()
}

fn report(out: RunOutput) -> Report {
    match out {
        RunOutput::Report(r) => r,
        RunOutput::Data(v) => panic!("expected a report, got {v}"),
    }
}

#[test]
fn runs_are_byte_deterministic() {
    for text in ["subcommand = verify-euler\nseed = 4", "subcommand = verify-padic\nprimes = 2\nseed = 4", "subcommand = reps\nbound = 2"] {
        let c = cfg(text);
        let a = harness::run(&c).unwrap().to_text();
        let b = harness::run(&c).unwrap().to_text();
        assert_eq!(a, b, "{text}");
    }
    for name in FIXTURES {
        assert_eq!(fixture(name, 3).unwrap(), fixture(name, 3).unwrap());
    }
    assert_ne!(fixture("euler-wedge2-sample", 3).unwrap(), fixture("euler-wedge2-sample", 4).unwrap());
}

#[test]
fn reports_are_sorted_anchored_and_summarized() {
    let rep = report(harness::run(&cfg("subcommand = verify-group\nseed = 2")).unwrap());
    assert!(rep.all_pass(), "{:?}", rep.failures().collect::<Vec<_>>());
    assert!(rep.records.windows(2).all(|w| w[0].name <= w[1].name));
    assert!(rep.records.iter().all(|r| !r.anchor.is_empty()));
    let text = rep.to_jsonl();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), rep.records.len() + 1);
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["total"], json!(rep.records.len()));
    assert_eq!(summary["failed"], json!(0));
    for l in &lines[..lines.len() - 1] {
        for key in ["name", "anchor", "inputs", "lhs", "rhs", "tolerance", "pass"] {
            assert!(l.get(key).is_some(), "missing {key} in {l}");
        }
    }
}

#[test]
fn data_subcommands_return_json() {
    let v = match harness::run(&cfg("subcommand = euler\nrep = std\nparams = 1, 2, 1/2")).unwrap() {
        RunOutput::Data(v) => v,
        RunOutput::Report(_) => panic!("euler is a data subcommand"),
    };
    assert!(v.is_object());
    let reps = harness::run(&cfg("subcommand = reps\nbound = 3")).unwrap();
    let RunOutput::Data(reps) = reps else { panic!() };
    assert_eq!(reps["count"], fixture("reps-Qi-T=I-bound3", 1).unwrap()["count"]);
}

#[test]
fn config_errors_carry_positions() {
    let err = RunConfig::parse("subcommand = reps\nbound: 3").unwrap_err();
    assert!(matches!(err, ConfigError::At { line: 2, .. }), "{err}");
    assert!(err.to_string().starts_with("line 2, column "));
    assert!(matches!(RunConfig::parse("seed = 1").unwrap_err(), ConfigError::Value { .. }));
    assert!(matches!(RunConfig::parse("subcommand = reps\nd = 4").unwrap_err(), ConfigError::At { line: 2, .. }));
    let mut c = RunConfig::new(Subcommand::Reps);
    assert!(c.set("quadrature.points", "0").is_err());
    assert!(c.set("grid", "1, x").is_err());
}

#[test]
fn unknown_fixture_is_an_error() {
    let c = cfg("subcommand = emit-fixture\nfixture = no-such");
    assert_eq!(harness::run(&c).unwrap_err(), HarnessError::UnknownFixture("no-such".into()));
}

proptest! {
    #[test]
    fn close_records_pass_iff_within_tolerance(a in -1e3f64..1e3, d in -1.0f64..1.0, tol in 0.0f64..1.0) {
        let r = Record::close("x", "anchor", json!({}), a + d, a, tol);
        prop_assert_eq!(r.pass, ((a + d) - a).abs() <= tol);
        let s = Report::new(vec![r.clone(), Record::exact("y", "anchor", json!({}), 1, 1)]).summary();
        prop_assert_eq!(s.passed + s.failed, 2);
        prop_assert_eq!(s.failed, usize::from(!r.pass));
    }

    #[test]
    fn config_text_round_trips_seed_and_primes(seed in any::<u64>(), ps in proptest::collection::vec(2u64..50, 1..4)) {
        let list = ps.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        let c = cfg(&format!("# comment\nsubcommand = verify-padic\nseed = {seed}\n\nprimes = {list}\n"));
        prop_assert_eq!(c.seed, seed);
        prop_assert_eq!(c.primes, ps);
    }
}
