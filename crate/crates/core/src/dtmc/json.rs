use serde::{Deserialize, Serialize};

use super::{Dtmc, DtmcError};

/// Self-contained single-file chain format.
///
/// ```json
/// { "states": 2, "init": 0, "ap": ["a"],
///   "labels": [[], ["a"]],
///   "transitions": [[0, 1, 1.0], [1, 1, 1.0]] }
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtmcDocument {
    pub states: usize,
    pub init: usize,
    #[serde(default)]
    pub ap: Vec<String>,
    #[serde(default)]
    pub labels: Vec<Vec<String>>,
    pub transitions: Vec<(usize, usize, f64)>,
}

impl DtmcDocument {
    pub fn into_dtmc(self) -> Result<Dtmc, DtmcError> {
        let bad = |msg: String| DtmcError::Malformed {
            what: "json",
            line: 0,
            msg,
        };
        if self.labels.len() > self.states {
            return Err(bad(format!(
                "{} label rows for {} states",
                self.labels.len(),
                self.states
            )));
        }
        let mut labels = vec![Vec::new(); self.states];
        for (s, names) in self.labels.iter().enumerate() {
            for name in names {
                let idx = self.ap.iter().position(|p| p == name).ok_or_else(|| {
                    bad(format!("state {s} uses undeclared proposition '{name}'"))
                })?;
                labels[s].push(idx);
            }
        }
        Dtmc::from_triples(self.ap, self.init, labels, &self.transitions)
    }

    pub fn from_dtmc(m: &Dtmc) -> Self {
        DtmcDocument {
            states: m.rows.len(),
            init: m.init(),
            ap: m.ap().to_vec(),
            labels: (0..m.rows.len())
                .map(|s| m.label_names(s).into_iter().map(String::from).collect())
                .collect(),
            transitions: m.triples(),
        }
    }
}

pub fn parse_json_dtmc(text: &str) -> Result<Dtmc, DtmcError> {
    let doc: DtmcDocument = serde_json::from_str(text)?;
    doc.into_dtmc()
}

impl Dtmc {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DtmcDocument::from_dtmc(self))
            .expect("chain documents always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtmc::{Chain, Issue};

    #[test]
    fn single_absorbing_state() {
        let m = parse_json_dtmc(
            r#"{"states":1,"init":0,"ap":[],"labels":[],"transitions":[[0,0,1.0]]}"#,
        )
        .unwrap();
        assert_eq!(m.num_states(), 1);
        assert!(m.validate().is_ok());
    }

    #[test]
    fn row_sum_over_tolerance() {
        let err = parse_json_dtmc(r#"{"states":1,"init":0,"transitions":[[0,0,1.0000001]]}"#)
            .unwrap_err();
        assert!(matches!(err, DtmcError::Invalid(ref v) if matches!(v[0], Issue::RowSum { .. })));
    }

    #[test]
    fn duplicate_edge() {
        let err =
            parse_json_dtmc(r#"{"states":2,"init":0,"transitions":[[0,1,0.5],[0,1,0.5],[1,1,1]]}"#)
                .unwrap_err();
        match err {
            DtmcError::Invalid(v) => assert_eq!(
                v,
                vec![Issue::Duplicate {
                    source: 0,
                    target: 1
                }]
            ),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn undeclared_label_and_bad_syntax() {
        assert!(parse_json_dtmc(
            r#"{"states":1,"init":0,"labels":[["a"]],"transitions":[[0,0,1]]}"#
        )
        .is_err());
        assert!(matches!(
            parse_json_dtmc("{ not json"),
            Err(DtmcError::Json(_))
        ));
    }

    #[test]
    fn round_trip() {
        let m = parse_json_dtmc(
            r#"{"states":3,"init":0,"ap":["a","b"],"labels":[[],["a"],["a","b"]],
                "transitions":[[0,1,0.3],[0,2,0.7],[1,1,1],[2,2,1]]}"#,
        )
        .unwrap();
        assert_eq!(parse_json_dtmc(&m.to_json()).unwrap(), m);
    }
}
