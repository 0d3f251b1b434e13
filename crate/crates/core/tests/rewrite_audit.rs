//! Every axiom survives the randomized audit on each backend.

use streamprop::classical::{FinSet, IntLin};
use streamprop::cpm::Cpm;
use streamprop::random::RandomMor;
use streamprop::rewrite::{verify_rule_soundness, AuditConfig, RuleId, AX};

fn audit_all<B: RandomMor>(be: &B, cfg: &AuditConfig) {
    let mut bad = Vec::new();
    for rule in AX.iter().copied().chain([RuleId::Interchange]) {
        let r = verify_rule_soundness(be, rule, cfg);
        if !r.passed() {
            bad.push(format!("{}: {} failures, e.g. {:?}", rule.name(), r.failures, r.counterexample));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn axioms_sound_on_cpm() {
    audit_all(&Cpm, &AuditConfig::default());
}

#[test]
fn axioms_sound_on_finset() {
    audit_all(&FinSet, &AuditConfig::default());
}

#[test]
fn axioms_sound_on_intlin() {
    audit_all(&IntLin, &AuditConfig { trials: 30, ..AuditConfig::default() });
}

#[test]
fn s5_is_unsound_on_every_backend() {
    let cfg = AuditConfig { trials: 20, ..AuditConfig::default() };
    for r in [
        verify_rule_soundness(&IntLin, RuleId::S5, &cfg),
        verify_rule_soundness(&FinSet, RuleId::S5, &cfg),
        verify_rule_soundness(&Cpm, RuleId::S5, &cfg),
    ] {
        assert!(r.failures > 0, "{r:?}");
        assert!(r.earliest_tick.unwrap() <= 3);
    }
}

#[test]
fn side_conditions_matter() {
    let cfg = AuditConfig { trials: 40, side_conditions: false, ..AuditConfig::default() };
    assert!(verify_rule_soundness(&Cpm, RuleId::DelayCausal, &cfg).failures > 0);
    assert!(verify_rule_soundness(&Cpm, RuleId::DelayIdem, &cfg).failures > 0);
    assert!(verify_rule_soundness(&FinSet, RuleId::DelayIdemW, &cfg).failures > 0);
}
