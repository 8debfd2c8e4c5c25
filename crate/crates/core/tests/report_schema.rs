use discernlab_core::discern::CertifyConfig;
use discernlab_core::{certify_weak_discernibility, DiscernibilityReport, Relation};

#[test]
fn report_round_trips_through_json() {
    let config = CertifyConfig {
        n_particles: 3,
        pure_samples: 10,
        mixed_samples: 3,
        max_degree: 2,
        ..CertifyConfig::default()
    };
    for relation in [Relation::T, Relation::C] {
        let report = certify_weak_discernibility(relation, &config).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: DiscernibilityReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["relation"], relation.to_string());
        assert_eq!(value["pairs"].as_array().unwrap().len(), 9);
    }
}

#[test]
fn same_seed_same_report() {
    let config = CertifyConfig {
        pure_samples: 30,
        mixed_samples: 5,
        seed: 5,
        ..CertifyConfig::default()
    };
    let a = certify_weak_discernibility(Relation::T, &config).unwrap();
    let b = certify_weak_discernibility(Relation::T, &config).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
