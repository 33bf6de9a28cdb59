use super::OmegaAutomaton;
use crate::error::{Error, Result};
use crate::logic::TruthValue;

fn line_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos: line, msg: format!("line {line}: {}", msg.into()) }
}

/// Parse the line-based automaton format:
///
/// ```text
/// states: s1 s2 s3
/// inputs: s1="a=1"
/// outputs: s3
/// init: 0 1/2 1/2        (optional, default all 0)
/// s1 -> s2 : 1           (label 1 feeds the value, 0 its negation)
/// ```
///
/// `#` starts a comment. Values are read at resolution `n`.
pub fn parse_automaton(text: &str, n: u32) -> Result<OmegaAutomaton> {
    let mut aut: Option<OmegaAutomaton> = None;
    let mut pending: Vec<(usize, &str)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let no = no + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("states:") {
            if aut.is_some() {
                return Err(line_err(no, "states declared twice"));
            }
            let states: Vec<String> = rest.split_whitespace().map(String::from).collect();
            for (i, s) in states.iter().enumerate() {
                if states[..i].contains(s) {
                    return Err(line_err(no, format!("duplicate state `{s}`")));
                }
            }
            aut = Some(OmegaAutomaton::empty(states, n));
            continue;
        }
        let a = aut.as_mut().ok_or_else(|| line_err(no, "`states:` must come first"))?;
        let idx = |a: &OmegaAutomaton, s: &str| a.state_index(s).ok_or_else(|| line_err(no, format!("unknown state `{s}`")));
        if let Some(rest) = line.strip_prefix("inputs:") {
            for item in rest.split_whitespace() {
                let (s, sign) = item.split_once('=').ok_or_else(|| line_err(no, format!("expected state=\"sign\", got `{item}`")))?;
                let sign = sign.trim_matches('"');
                let i = idx(a, s)?;
                a.inputs.push((i, sign.to_string()));
            }
        } else if let Some(rest) = line.strip_prefix("outputs:") {
            for s in rest.split_whitespace() {
                let i = idx(a, s)?;
                a.outputs.push(i);
            }
        } else if let Some(rest) = line.strip_prefix("init:") {
            let vals: Vec<&str> = rest.split_whitespace().collect();
            if vals.len() != a.states.len() {
                return Err(line_err(no, format!("init needs {} values", a.states.len())));
            }
            a.e0 = vals.iter().map(|v| TruthValue::parse_in(v, n)).collect::<Result<_>>().map_err(|e| line_err(no, e.to_string()))?;
        } else if line.contains("->") {
            pending.push((no, line));
        } else {
            return Err(line_err(no, format!("cannot read `{line}`")));
        }
    }
    let mut a = aut.ok_or_else(|| line_err(0, "missing `states:`"))?;
    for (no, line) in pending {
        let (edge, label) = line.split_once(':').ok_or_else(|| line_err(no, "edge needs `: 0` or `: 1`"))?;
        let (src, dst) = edge.split_once("->").unwrap();
        let src = a.state_index(src.trim()).ok_or_else(|| line_err(no, format!("unknown state `{}`", src.trim())))?;
        let dst = a.state_index(dst.trim()).ok_or_else(|| line_err(no, format!("unknown state `{}`", dst.trim())))?;
        match label.trim() {
            "0" => a.m0[dst][src] = true,
            "1" => a.m1[dst][src] = true,
            other => return Err(line_err(no, format!("edge label must be 0 or 1, got `{other}`"))),
        }
    }
    a.validate()?;
    Ok(a)
}
