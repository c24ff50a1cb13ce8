use nilorbit::fixtures::{all_fixtures, by_name, Fixture};
use nilorbit::hodge::{check_dh, DeligneHodgeSystem};
use serde_json::json;

#[test]
fn system_files_round_trip() {
    for fx in all_fixtures() {
        let text = serde_json::to_string(&fx.to_json()).unwrap();
        let back = Fixture::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.name, fx.name);
        assert_eq!(back.basis, fx.basis);
        assert_eq!(back.w, fx.w);
        assert_eq!(back.ns, fx.ns);
        assert_eq!(back.yr, fx.yr);
        assert_eq!(back.f, fx.f);
        assert_eq!(back.q, fx.q);
        assert_eq!(back.extras, fx.extras);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }
    assert!(by_name("unpolarizable-pair").is_some());
    assert!(by_name("nothing").is_none());
}

#[test]
fn read_system_survives_checks() {
    let fx = by_name("unpolarizable-pair").unwrap();
    let back = Fixture::from_json(&fx.to_json()).unwrap();
    assert!(check_dh(&DeligneHodgeSystem::from_fixture(&back)).passed());
}

#[test]
fn minimal_system_file() {
    let v = json!({"n": [[["0", "0"], ["1", "0"]]], "weight": 1});
    let fx = Fixture::from_json(&v).unwrap();
    assert_eq!(fx.dim(), 2);
    assert_eq!(fx.basis, vec!["v1", "v2"]);
    assert!(fx.w.is_pure());
    assert!(Fixture::from_json(&json!({"n": [[["0", "1"]]]})).is_err());
    assert!(Fixture::from_json(&json!({"n": [[["0", "a/b"], ["0", "0"]]]})).is_err());
    assert!(Fixture::from_json(&json!([1, 2])).is_err());
    assert!(Fixture::from_json(&json!({"n": [[["0"]]], "basis": ["x", "y"]})).is_err());
}
