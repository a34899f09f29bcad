use super::{arrow, directives, is_token, syntax, FormatError};
use crate::tm::{base_symbol_names, Action, TableBuilder, TableDtm};
use crate::Dir;
use std::collections::{HashMap, HashSet};
use std::fmt::Write;

pub fn parse_machine(text: &str) -> Result<TableDtm, FormatError> {
    let mut kind = None;
    let mut flags: Option<Vec<String>> = None;
    let mut input: Option<Vec<char>> = None;
    let mut work: Option<(usize, Vec<String>)> = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut initial = None;
    let mut finals = Vec::new();
    let mut ranks = Vec::new();
    let mut trans = Vec::new();
    let mut blank_seen = false;
    let dup = |line, d: &str| syntax(line, format!("duplicate `{d}` directive"));
    for (line, d, args) in directives(text)? {
        let toks = || args.split_whitespace().map(String::from).collect::<Vec<_>>();
        match d.as_str() {
            "kind" => {
                if kind.replace((line, args.clone())).is_some() {
                    return Err(dup(line, "kind"));
                }
            }
            "flags" => {
                if flags.replace(toks()).is_some() {
                    return Err(dup(line, "flags"));
                }
            }
            "input" => {
                let mut v = Vec::new();
                for t in args.split_whitespace() {
                    let mut cs = t.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => v.push(c),
                        _ => return Err(syntax(line, format!("input symbols are single characters, got `{t}`"))),
                    }
                }
                if input.replace(v).is_some() {
                    return Err(dup(line, "input"));
                }
            }
            "blank" => {
                if args != "_" {
                    return Err(syntax(line, "the blank is always `_`"));
                }
                blank_seen = true;
            }
            "work" => {
                if work.replace((line, toks())).is_some() {
                    return Err(dup(line, "work"));
                }
            }
            "states" => {
                if states.replace((line, toks())).is_some() {
                    return Err(dup(line, "states"));
                }
            }
            "initial" => {
                if initial.replace((line, args.clone())).is_some() {
                    return Err(dup(line, "initial"));
                }
            }
            "final" => finals.push((line, toks())),
            "rank" => ranks.push((line, toks())),
            "trans" => trans.push((line, args.clone())),
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let (kind_line, kind) = kind.ok_or(FormatError::Missing("kind"))?;
    if kind != "dtm" {
        return Err(syntax(kind_line, format!("unknown machine kind `{kind}`")));
    }
    let mut end_marked = false;
    for f in flags.unwrap_or_default() {
        match f.as_str() {
            "endmarked" => end_marked = true,
            other => return Err(FormatError::Syntax { line: kind_line, msg: format!("unknown flag `{other}`") }),
        }
    }
    if !blank_seen {
        return Err(FormatError::Missing("blank"));
    }
    let input = input.ok_or(FormatError::Missing("input"))?;
    let (work_line, work) = work.unwrap_or((0, Vec::new()));
    let (states_line, states) = states.ok_or(FormatError::Missing("states"))?;

    let mut b = TableBuilder::new(&input, work, end_marked);
    let mut sym_index = HashMap::new();
    for (i, s) in b.symbol_names.iter().enumerate() {
        if sym_index.insert(s.clone(), i as u64).is_some() {
            return Err(syntax(work_line, format!("duplicate symbol `{s}`")));
        }
    }
    let mut state_index = HashMap::new();
    for s in &states {
        if state_index.insert(s.clone(), b.add_state(s.clone(), false)).is_some() {
            return Err(syntax(states_line, format!("duplicate state `{s}`")));
        }
    }
    let state = |line, s: &str| {
        state_index
            .get(s)
            .copied()
            .ok_or_else(|| syntax(line, format!("unknown state `{s}`")))
    };
    let sym = |line, s: &str| {
        sym_index
            .get(s)
            .copied()
            .ok_or_else(|| syntax(line, format!("unknown symbol `{s}`")))
    };
    let (init_line, init) = initial.ok_or(FormatError::Missing("initial"))?;
    b.initial = state(init_line, init.trim())? as u32;
    for (line, fs) in &finals {
        for f in fs {
            let q = state(*line, f)?;
            b.set_final(q, true);
        }
    }
    if !ranks.is_empty() {
        let mut rank = vec![0u64; b.num_symbols()];
        for (line, rs) in &ranks {
            for r in rs {
                let (s, v) = r
                    .rsplit_once('=')
                    .ok_or_else(|| syntax(*line, format!("expected `symbol=rank`, got `{r}`")))?;
                let v: u64 = v.parse().map_err(|_| syntax(*line, format!("bad rank `{v}`")))?;
                rank[sym(*line, s)? as usize] = v;
            }
        }
        b.rank = Some(rank);
    }
    let mut seen = HashSet::new();
    for (line, args) in &trans {
        let (l, r) = arrow(*line, args)?;
        if l.len() != 2 || r.len() != 3 {
            return Err(syntax(*line, "expected `trans: p x -> q y D`"));
        }
        let (p, x) = (state(*line, l[0])?, sym(*line, l[1])?);
        if !seen.insert((p, x)) {
            return Err(syntax(*line, format!("second transition for ({}, {})", l[0], l[1])));
        }
        let dir = match r[2] {
            "L" => Dir::L,
            "R" => Dir::R,
            s => return Err(syntax(*line, format!("direction must be L or R, got `{s}`"))),
        };
        b.set(p, x, Action::new(state(*line, r[0])?, sym(*line, r[1])?, dir));
    }
    Ok(b.build()?)
}

/// Canonical text of an explicit machine; transitions are listed by state,
/// then symbol id.
pub fn print_machine(m: &TableDtm) -> Result<String, FormatError> {
    let names = m.symbol_names();
    let base = base_symbol_names(m.input()).len();
    let mut seen = HashSet::new();
    for s in names.iter().chain(m.state_names()) {
        if !is_token(s) || s.contains('=') {
            return Err(FormatError::Unprintable(format!("name `{s}` is not a token")));
        }
    }
    for s in names {
        if !seen.insert(s) {
            return Err(FormatError::Unprintable(format!("duplicate symbol name `{s}`")));
        }
    }
    let mut seen = HashSet::new();
    for s in m.state_names() {
        if !seen.insert(s) {
            return Err(FormatError::Unprintable(format!("duplicate state name `{s}`")));
        }
    }
    let mut out = String::new();
    writeln!(out, "kind: dtm").unwrap();
    writeln!(out, "flags:{}", if m.end_marked() { " endmarked" } else { "" }).unwrap();
    let input: Vec<String> = m.input().iter().map(|c| c.to_string()).collect();
    writeln!(out, "input: {}", input.join(" ")).unwrap();
    writeln!(out, "blank: _").unwrap();
    writeln!(out, "work: {}", names[base..].join(" ")).unwrap();
    writeln!(out, "states: {}", m.state_names().join(" ")).unwrap();
    writeln!(out, "initial: {}", m.state_name(m.initial())).unwrap();
    let finals: Vec<&str> = (0..m.num_states())
        .filter(|&q| m.is_final(q))
        .map(|q| m.state_name(q))
        .collect();
    writeln!(out, "final: {}", finals.join(" ")).unwrap();
    if let Some(rank) = m.rank() {
        let rs: Vec<String> = names.iter().zip(rank).map(|(s, r)| format!("{s}={r}")).collect();
        writeln!(out, "rank: {}", rs.join(" ")).unwrap();
    }
    for (q, s, a) in m.transitions() {
        writeln!(
            out,
            "trans: {} {} -> {} {} {}",
            m.state_name(q),
            names[s as usize],
            m.state_name(a.next),
            names[a.write as usize],
            a.dir.as_char()
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::powerset_machine;
    use crate::harness::{random_1nfa, GeneratorSpec};
    use crate::tm::{run, RunOptions, LEFT_END};

    const SAMPLE: &str = "\
kind: dtm
flags: endmarked
input: a
blank: _
work: x
states: go done
initial: go
final: done
rank: a=1 x=0
trans: go < -> go < R
trans: go a -> go x R
trans: go > -> done > L
";

    #[test]
    fn parses_and_runs_sample() {
        let m = parse_machine(SAMPLE).unwrap();
        assert_eq!(m.num_states(), 2);
        assert!(m.delta(0, LEFT_END).is_some());
        let r = run(&m, &[0, 0, 0], RunOptions::default()).unwrap();
        assert!(r.accepted());
        assert_eq!(print_machine(&m).unwrap(), print_machine(&parse_machine(&print_machine(&m).unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn compiled_machines_round_trip() {
        for seed in 0..3 {
            let m = powerset_machine(&random_1nfa(&GeneratorSpec::new(3, 2, seed))).unwrap().machine;
            let t = print_machine(&m).unwrap();
            let back = parse_machine(&t).unwrap();
            assert_eq!(print_machine(&back).unwrap(), t);
            for w in [vec![], vec![0, 1, 1], vec![1, 0, 1, 1]] {
                let a = run(&m, &w, RunOptions::with_budget(1 << 24)).unwrap();
                let b = run(&back, &w, RunOptions::with_budget(1 << 24)).unwrap();
                assert_eq!((a.accepted(), a.steps), (b.accepted(), b.steps));
            }
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = SAMPLE.replace("trans: go a -> go x R", "trans: go a -> go y R");
        assert!(parse_machine(&bad).unwrap_err().to_string().starts_with("line 11:"));
        let bad = SAMPLE.replace("final: done", "accept: done");
        assert!(parse_machine(&bad).unwrap_err().to_string().starts_with("line 8: unknown directive"));
        let bad = format!("{SAMPLE}trans: go a -> done a L\n");
        assert!(parse_machine(&bad).unwrap_err().to_string().starts_with("line 13:"));
    }
}
