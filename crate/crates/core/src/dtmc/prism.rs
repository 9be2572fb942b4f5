//! PRISM explicit-state exports: a `.tra` transition file and a `.lab`
//! label file.
//!
//! ```text
//! 3 4            0="init" 1="deadlock" 2="a"
//! 0 1 0.3        0: 0
//! 0 2 0.7        1: 2
//! 1 1 1
//! 2 2 1
//! ```

use std::collections::BTreeMap;

use super::{Chain, Dtmc, DtmcError};

const RESERVED: [&str; 2] = ["init", "deadlock"];

fn malformed(what: &'static str, line: usize, msg: impl Into<String>) -> DtmcError {
    DtmcError::Malformed {
        what,
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(
    tok: &str,
    what: &'static str,
    line: usize,
) -> Result<T, DtmcError> {
    tok.parse()
        .map_err(|_| malformed(what, line, format!("cannot parse '{tok}'")))
}

type Rows = Vec<Vec<(usize, f64)>>;

fn parse_tra(text: &str) -> Result<(usize, Rows), DtmcError> {
    const WHAT: &str = "transitions";
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| malformed(WHAT, 1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(malformed(
            WHAT,
            hline,
            "header must be '<#states> <#transitions>'",
        ));
    }
    let n: usize = parse_num(head[0], WHAT, hline)?;
    let m: usize = parse_num(head[1], WHAT, hline)?;
    let mut rows = vec![Vec::new(); n];
    let mut count = 0;
    for (lineno, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(malformed(WHAT, lineno, "expected '<src> <dst> <prob>'"));
        }
        let src: usize = parse_num(toks[0], WHAT, lineno)?;
        let dst: usize = parse_num(toks[1], WHAT, lineno)?;
        let prob: f64 = parse_num(toks[2], WHAT, lineno)?;
        for s in [src, dst] {
            if s >= n {
                return Err(malformed(
                    WHAT,
                    lineno,
                    format!("state index {s} out of range (states: {n})"),
                ));
            }
        }
        rows[src].push((dst, prob));
        count += 1;
    }
    if count != m {
        return Err(malformed(
            WHAT,
            hline,
            format!("header announces {m} transitions, found {count}"),
        ));
    }
    Ok((n, rows))
}

struct Labels {
    ap: Vec<String>,
    init: usize,
    labels: Vec<Vec<usize>>,
}

fn parse_lab(text: &str, n: usize) -> Result<Labels, DtmcError> {
    const WHAT: &str = "labels";
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| malformed(WHAT, 1, "missing header"))?;

    // label id -> index into ap, or None for reserved names
    let mut ids: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    let mut init_id = None;
    let mut ap = Vec::new();
    for decl in header.split_whitespace() {
        let (id, name) = decl
            .split_once('=')
            .ok_or_else(|| malformed(WHAT, hline, format!("bad declaration '{decl}'")))?;
        let id: usize = parse_num(id, WHAT, hline)?;
        let name = name
            .strip_prefix('"')
            .and_then(|s| s.strip_suffix('"'))
            .ok_or_else(|| malformed(WHAT, hline, format!("unquoted label name in '{decl}'")))?;
        if ids.contains_key(&id) {
            return Err(malformed(
                WHAT,
                hline,
                format!("label id {id} declared twice"),
            ));
        }
        if name == "init" {
            init_id = Some(id);
        }
        if RESERVED.contains(&name) {
            ids.insert(id, None);
        } else {
            ids.insert(id, Some(ap.len()));
            ap.push(name.to_string());
        }
    }
    let init_id = init_id.ok_or(DtmcError::InitCount { found: 0 })?;

    let mut labels = vec![Vec::new(); n];
    let mut inits = Vec::new();
    for (lineno, line) in lines {
        let (state, rest) = line
            .split_once(':')
            .ok_or_else(|| malformed(WHAT, lineno, "expected '<state>: <id> ...'"))?;
        let state: usize = parse_num(state.trim(), WHAT, lineno)?;
        if state >= n {
            return Err(malformed(
                WHAT,
                lineno,
                format!("state index {state} out of range (states: {n})"),
            ));
        }
        for tok in rest.split_whitespace() {
            let id: usize = parse_num(tok, WHAT, lineno)?;
            match ids.get(&id) {
                None => return Err(malformed(WHAT, lineno, format!("undeclared label id {id}"))),
                Some(Some(p)) => labels[state].push(*p),
                Some(None) if id == init_id => inits.push(state),
                Some(None) => {}
            }
        }
    }
    inits.sort_unstable();
    inits.dedup();
    if inits.len() != 1 {
        return Err(DtmcError::InitCount { found: inits.len() });
    }
    Ok(Labels {
        ap,
        init: inits[0],
        labels,
    })
}

/// Parse a `.tra`/`.lab` pair. The `init` and `deadlock` labels are not
/// propositions; the unique `init` state becomes the initial state.
pub fn parse_prism_explicit(tra_text: &str, lab_text: &str) -> Result<Dtmc, DtmcError> {
    let (n, rows) = parse_tra(tra_text)?;
    let Labels { ap, init, labels } = parse_lab(lab_text, n)?;
    Dtmc::new(ap, init, labels, rows)
}

impl Dtmc {
    /// Export as PRISM explicit `(tra, lab)` texts.
    pub fn to_prism_explicit(&self) -> (String, String) {
        let mut tra = format!("{} {}\n", self.num_states(), self.num_transitions());
        for (s, t, p) in self.triples() {
            tra.push_str(&format!("{s} {t} {p}\n"));
        }
        let mut lab = String::from("0=\"init\"");
        for (i, name) in self.ap().iter().enumerate() {
            lab.push_str(&format!(" {}=\"{name}\"", i + 1));
        }
        lab.push('\n');
        for s in 0..self.num_states() {
            let mut ids: Vec<usize> = self.labels(s).iter().map(|p| p + 1).collect();
            if s == self.init() {
                ids.insert(0, 0);
            }
            if !ids.is_empty() {
                let ids: Vec<String> = ids.iter().map(ToString::to_string).collect();
                lab.push_str(&format!("{s}: {}\n", ids.join(" ")));
            }
        }
        (tra, lab)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtmc::Issue;

    #[test]
    fn two_state_chain() {
        let m = parse_prism_explicit(
            "2 2\n0 1 1.0\n1 1 1.0\n",
            "0=\"init\" 1=\"a\"\n0: 0\n1: 1\n",
        )
        .unwrap();
        assert_eq!(m.init(), 0);
        assert_eq!(m.ap(), &["a".to_string()]);
        assert_eq!(m.successors(0), &[(1, 1.0)]);
        assert_eq!(m.successors(1), &[(1, 1.0)]);
        assert!(m.labels(0).is_empty());
        assert_eq!(m.label_names(1), vec!["a"]);
    }

    #[test]
    fn deadlock_label_is_stripped() {
        let m = parse_prism_explicit(
            "2 2\n0 1 1\n1 1 1\n",
            "0=\"init\" 1=\"deadlock\" 2=\"goal\"\n0: 0\n1: 1 2\n",
        )
        .unwrap();
        assert_eq!(m.ap(), &["goal".to_string()]);
        assert_eq!(m.label_names(1), vec!["goal"]);
    }

    #[test]
    fn row_sum_violation() {
        let err = parse_prism_explicit("2 2\n0 1 0.5\n1 1 1\n", "0=\"init\"\n0: 0\n").unwrap_err();
        match err {
            DtmcError::Invalid(issues) => {
                assert_eq!(issues, vec![Issue::RowSum { state: 0, sum: 0.5 }])
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn init_must_be_unique() {
        let tra = "2 2\n0 1 1\n1 1 1\n";
        assert!(matches!(
            parse_prism_explicit(tra, "0=\"a\"\n0: 0\n"),
            Err(DtmcError::InitCount { found: 0 })
        ));
        assert!(matches!(
            parse_prism_explicit(tra, "0=\"init\" 1=\"a\"\n1: 1\n"),
            Err(DtmcError::InitCount { found: 0 })
        ));
        assert!(matches!(
            parse_prism_explicit(tra, "0=\"init\"\n0: 0\n1: 0\n"),
            Err(DtmcError::InitCount { found: 2 })
        ));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let lab = "0=\"init\"\n0: 0\n";
        match parse_prism_explicit("2 2\n0 1 1\n1 x 1\n", lab).unwrap_err() {
            DtmcError::Malformed { line, what, .. } => {
                assert_eq!((what, line), ("transitions", 3))
            }
            e => panic!("unexpected {e}"),
        }
        match parse_prism_explicit("2 2\n0 1 1\n1 5 1\n", lab).unwrap_err() {
            DtmcError::Malformed { line, msg, .. } => {
                assert_eq!(line, 3);
                assert!(msg.contains("out of range"));
            }
            e => panic!("unexpected {e}"),
        }
        match parse_prism_explicit("2 3\n0 1 1\n1 1 1\n", lab).unwrap_err() {
            DtmcError::Malformed { line, .. } => assert_eq!(line, 1),
            e => panic!("unexpected {e}"),
        }
        match parse_prism_explicit("2 2\n0 1 1\n1 1 1\n", "0=\"init\"\n0: 0\n1: 7\n").unwrap_err() {
            DtmcError::Malformed { line, what, .. } => assert_eq!((what, line), ("labels", 3)),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn export_parses_back() {
        let m = Dtmc::from_triples(
            vec!["a".into(), "b".into()],
            1,
            vec![vec![0], vec![], vec![0, 1]],
            &[(0, 0, 1.0), (1, 0, 0.25), (1, 2, 0.75), (2, 2, 1.0)],
        )
        .unwrap();
        let (tra, lab) = m.to_prism_explicit();
        assert_eq!(parse_prism_explicit(&tra, &lab).unwrap(), m);
    }
}
