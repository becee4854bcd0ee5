use super::ClaimReport;

/// One line per claim: status, id, inputs, then witness and timing when present.
pub fn render_text(reports: &[ClaimReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
        out.push_str(&format!("{:<8} {} [{}]", r.status.to_string(), r.claim_id, inputs.join(" ")));
        if let Some(w) = &r.witness {
            out.push_str(&format!(" witness={w}"));
        }
        if let Some(ms) = r.elapsed_ms {
            out.push_str(&format!(" elapsed={ms}ms"));
        }
        out.push('\n');
    }
    out
}

pub fn render_json(reports: &[ClaimReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

fn plain(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{Status, Witness};

    fn report() -> ClaimReport {
        let mut inputs = super::super::Inputs::new();
        inputs.insert("family".into(), "q8".into());
        inputs.insert("s".into(), 1.into());
        ClaimReport {
            claim_id: "thm2.i.rank.s=1".into(),
            inputs,
            status: Status::Verified,
            witness: Some(Witness::Integers(vec![5, 5])),
            elapsed_ms: None,
            discrepancy: false,
        }
    }

    #[test]
    fn text_line() {
        assert_eq!(render_text(&[report()]), "VERIFIED thm2.i.rank.s=1 [family=q8 s=1] witness=(5, 5)\n");
    }

    #[test]
    fn json_fields() {
        let v: serde_json::Value = serde_json::from_str(&render_json(&[report()])).unwrap();
        let rec = &v[0];
        assert_eq!(rec["claimId"], "thm2.i.rank.s=1");
        assert_eq!(rec["status"], "VERIFIED");
        assert_eq!(rec["witness"], serde_json::json!([5, 5]));
        assert!(rec["elapsedMs"].is_null());
        assert_eq!(rec.as_object().unwrap().len(), 5);
    }
}
