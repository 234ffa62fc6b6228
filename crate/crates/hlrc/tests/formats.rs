use hlrc::formats::{
    append_csv, read_json, to_json, write_csv, write_json, CodeJson, CodeSpecJson, MessageJson,
    ScenarioConfig, SimSummaryRow, SurfaceJson, WordJson,
};
use hlrc::{exit, CliError};
use hlrc_core::code::{build_code, CodeSpec};
use hlrc_core::geometry::{Family, SurfaceSpec};
use hlrc_core::recovery::ReceivedWord;
use hlrc_core::sim::random_message;

#[test]
fn code_json_roundtrips_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    for spec in [
        CodeSpec::ex4(3, 2, 2).unwrap(),
        CodeSpec::ex5(3, 5, 2).unwrap(),
        CodeSpec::ex5_lambda(3, None, 4, 2, 2).unwrap(),
    ] {
        let code = build_code(&spec).unwrap();
        let path = dir.path().join("code.json");
        write_json(&path, &CodeJson::from_code(&code)).unwrap();
        let back: CodeJson = read_json(&path).unwrap();
        let rebuilt = back.to_code().unwrap();
        assert_eq!(rebuilt.spec(), code.spec());
        assert_eq!(rebuilt.generator(), code.generator());
    }
}

#[test]
fn tampered_generator_is_rejected() {
    let code = build_code(&CodeSpec::ex4(3, 2, 2).unwrap()).unwrap();
    let mut json = CodeJson::from_code(&code);
    json.generator[0][0] = (json.generator[0][0] + 1) % 9;
    assert!(matches!(json.to_code(), Err(CliError::Format(_))));
}

#[test]
fn spec_json_revalidates() {
    let mut json = CodeSpecJson::from_spec(&CodeSpec::ex4(3, 2, 2).unwrap());
    assert!(json.to_spec().is_ok());
    json.rho2 = 7;
    assert_eq!(json.to_spec().unwrap_err().exit_code(), exit::SPEC);
}

#[test]
fn surface_json_keeps_lambda() {
    for family in [Family::Ex4, Family::Ex4Shifted, Family::Ex5Lambda] {
        let spec = SurfaceSpec::family(family, 5, None).unwrap();
        let text = to_json(&SurfaceJson::from_spec(&spec));
        let back: SurfaceJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_spec().unwrap(), spec);
    }
}

#[test]
fn word_json_keeps_erasures_as_null() {
    let code = build_code(&CodeSpec::ex4(3, 2, 2).unwrap()).unwrap();
    let word = code.encode(&random_message(&code, 3)).unwrap();
    let mut rx = ReceivedWord::from_codeword(&word);
    rx.erase(0);
    rx.erase(50);
    let text = to_json(&WordJson::from_word(&code, &rx));
    assert!(text.contains("null"));
    let back: WordJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_word(&code).unwrap(), rx);
}

#[test]
fn words_are_bound_to_their_code() {
    let a = build_code(&CodeSpec::ex4(3, 2, 2).unwrap()).unwrap();
    let b = build_code(&CodeSpec::ex4(3, 3, 2).unwrap()).unwrap();
    let word = a.encode(&random_message(&a, 1)).unwrap();
    let json = WordJson::from_codeword(&a, &word);
    assert!(json.to_word(&b).is_err());
    let msg = MessageJson {
        code_ref: b.describe(),
        message: vec![vec![0, 0]; b.message_len()],
    };
    assert!(msg.to_message(&a).is_err());
    assert_eq!(msg.to_message(&b).unwrap().len(), b.message_len());
}

#[test]
fn scenario_config_rejects_unknown_fields() {
    let good = r#"{"family":"ex4","p":3,"rho1":2,"rho2":2,"nodes":8,
                   "scenario":{"kind":"random_nodes","count":1,"seed":7}}"#;
    let cfg: ScenarioConfig = serde_json::from_str(good).unwrap();
    assert_eq!(cfg.policy, "global");
    assert_eq!(cfg.rng, "splitmix64");
    let bad = good.replace("\"nodes\"", "\"nodez\"");
    assert!(serde_json::from_str::<ScenarioConfig>(&bad).is_err());
}

#[test]
fn csv_append_writes_one_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let row = SimSummaryRow {
        family: "ex4".into(),
        p: 3,
        rho1: 2,
        rho2: 2,
        nodes: 8,
        kind: "random_nodes".into(),
        count: 1,
        seed: 7,
        policy: "global".into(),
        erased: 12,
        recovered: 12,
        unrecoverable: 0,
        lower: 12,
        middle: 0,
        global: 0,
        symbols_read: 24,
        nodes_contacted: 7,
    };
    append_csv(&path, &row).unwrap();
    append_csv(&path, &row).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("family,p,"));
    assert_eq!(lines[1], lines[2]);

    let mut out = Vec::new();
    write_csv(std::path::Path::new("-"), &[row], &mut out).unwrap();
    assert_eq!(
        String::from_utf8(out).unwrap(),
        format!("{}\n{}\n", lines[0], lines[1])
    );
}

#[test]
fn unreadable_files_map_to_io_exit() {
    let err = read_json::<CodeJson>(std::path::Path::new("/nonexistent/code.json")).unwrap_err();
    assert_eq!(err.exit_code(), exit::IO);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(
        read_json::<CodeJson>(&path).unwrap_err().exit_code(),
        exit::IO
    );
}
