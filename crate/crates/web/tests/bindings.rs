use real_chrom_web::{group_text, normal_form_text, twist_json};

#[test]
fn group_lookup() {
    assert_eq!(group_text("bprn", 1, 1, 0, "theorem").unwrap(), "Z/2 {v1 a}");
    assert_eq!(group_text("bpr", -1, 5, -3, "theorem").unwrap(), "Z(2) {v1 s^-4}");
    assert!(group_text("bprn", -1, 0, 0, "theorem").is_err());
    assert!(group_text("bprn", 1, 0, 0, "sideways").is_err());
}

#[test]
fn twist_rows() {
    let json = twist_json("bprn", 1, 0, 0, 16).unwrap();
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[4]["freeRank"], 1);
    assert!(twist_json("tate", 1, 0, -1000, 1000).is_err());
}

#[test]
fn reductions() {
    assert_eq!(normal_form_text("bprn", 1, "v0^2 v1^2 s^-2").unwrap(), "2 * v0 v1^2 s^-2");
    assert_eq!(normal_form_text("tate", 1, "a^3").unwrap(), "a^3");
    assert!(normal_form_text("bprn", 1, "v1 a^-1").is_err());
    assert!(normal_form_text("bprn", 1, "v1 ^^").is_err());
}
