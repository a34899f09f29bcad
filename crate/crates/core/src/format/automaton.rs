use super::{arrow, directives, is_token, syntax, FormatError};
use crate::automata::{OneWayNfa, TapeSymbol, TwoWayNfa};
use crate::constructions::Automaton;
use crate::Dir;
use std::collections::HashMap;
use std::fmt::Write;

#[derive(Default)]
struct Header {
    kind: Option<(usize, String)>,
    states: Option<Vec<String>>,
    alphabet: Option<Vec<char>>,
    initial: Option<(usize, String)>,
    finals: Vec<(usize, String)>,
    trans: Vec<(usize, String)>,
}

fn set_once<T>(slot: &mut Option<T>, v: T, line: usize, d: &str) -> Result<(), FormatError> {
    if slot.is_some() {
        return Err(syntax(line, format!("duplicate `{d}` directive")));
    }
    *slot = Some(v);
    Ok(())
}

pub fn parse_automaton(text: &str) -> Result<Automaton, FormatError> {
    let mut h = Header::default();
    for (line, d, args) in directives(text)? {
        match d.as_str() {
            "kind" => set_once(&mut h.kind, (line, args), line, "kind")?,
            "states" => {
                let v: Vec<String> = args.split_whitespace().map(String::from).collect();
                set_once(&mut h.states, v, line, "states")?
            }
            "alphabet" => {
                let mut v = Vec::new();
                for t in args.split_whitespace() {
                    let mut cs = t.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => v.push(c),
                        _ => return Err(syntax(line, format!("alphabet symbols are single characters, got `{t}`"))),
                    }
                }
                set_once(&mut h.alphabet, v, line, "alphabet")?
            }
            "initial" => set_once(&mut h.initial, (line, args), line, "initial")?,
            "final" => h.finals.push((line, args)),
            "trans" => h.trans.push((line, args)),
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let (kind_line, kind) = h.kind.ok_or(FormatError::Missing("kind"))?;
    let states = h.states.ok_or(FormatError::Missing("states"))?;
    let alphabet = h.alphabet.ok_or(FormatError::Missing("alphabet"))?;
    let (init_line, init) = h.initial.ok_or(FormatError::Missing("initial"))?;
    let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let state = |line: usize, s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| syntax(line, format!("unknown state `{s}`")))
    };
    let initial = state(init_line, init.trim())?;
    let mut finals = Vec::new();
    for (line, args) in &h.finals {
        for s in args.split_whitespace() {
            finals.push(state(*line, s)?);
        }
    }
    let letter = |line: usize, s: &str| {
        let mut cs = s.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => alphabet
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| syntax(line, format!("symbol `{s}` is not in the alphabet"))),
            _ => Err(syntax(line, format!("bad symbol `{s}`"))),
        }
    };
    match kind.as_str() {
        "1nfa" => {
            let mut trans = Vec::new();
            for (line, args) in &h.trans {
                match arrow(*line, args)? {
                    (l, r) if l.len() == 2 && r.len() == 1 => {
                        trans.push((state(*line, l[0])?, letter(*line, l[1])?, state(*line, r[0])?))
                    }
                    _ => return Err(syntax(*line, "expected `trans: p a -> q`")),
                }
            }
            Ok(Automaton::OneWay(OneWayNfa::new(states.clone(), alphabet.clone(), initial, &finals, trans)?))
        }
        "2nfa" => {
            let mut trans = Vec::new();
            for (line, args) in &h.trans {
                let (l, r) = arrow(*line, args)?;
                if l.len() != 2 || r.len() != 2 {
                    return Err(syntax(*line, "expected `trans: p x -> q D`"));
                }
                let x = match l[1] {
                    "<" => TapeSymbol::LeftEnd,
                    ">" => TapeSymbol::RightEnd,
                    s => TapeSymbol::Input(letter(*line, s)?),
                };
                let d = match r[1] {
                    "L" => Dir::L,
                    "R" => Dir::R,
                    s => return Err(syntax(*line, format!("direction must be L or R, got `{s}`"))),
                };
                trans.push((state(*line, l[0])?, x, state(*line, r[0])?, d));
            }
            Ok(Automaton::TwoWay(TwoWayNfa::new(states.clone(), alphabet.clone(), initial, &finals, trans)?))
        }
        k => Err(syntax(kind_line, format!("unknown automaton kind `{k}`"))),
    }
}

fn check_names(names: &[String]) -> Result<(), FormatError> {
    match names.iter().find(|s| !is_token(s)) {
        Some(s) => Err(FormatError::Unprintable(format!("state name `{s}` is not a token"))),
        None => Ok(()),
    }
}

fn join_chars(cs: &[char]) -> String {
    cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical text of an automaton: transitions sorted by source state,
/// then symbol (⊢, letters, ⊣), then target.
pub fn print_automaton(a: &Automaton) -> Result<String, FormatError> {
    let mut out = String::new();
    match a {
        Automaton::OneWay(a) => {
            check_names(a.state_names())?;
            let name = |q: usize| a.state_name(q);
            writeln!(out, "kind: 1nfa").unwrap();
            writeln!(out, "states: {}", a.state_names().join(" ")).unwrap();
            writeln!(out, "alphabet: {}", join_chars(a.alphabet())).unwrap();
            writeln!(out, "initial: {}", name(a.initial())).unwrap();
            let finals: Vec<&str> = a.finals().into_iter().map(name).collect();
            writeln!(out, "final: {}", finals.join(" ")).unwrap();
            for (p, x, q) in a.transitions() {
                writeln!(out, "trans: {} {} -> {}", name(p), a.alphabet()[x], name(q)).unwrap();
            }
        }
        Automaton::TwoWay(a) => {
            check_names(a.state_names())?;
            let name = |q: usize| a.state_name(q);
            writeln!(out, "kind: 2nfa").unwrap();
            writeln!(out, "states: {}", a.state_names().join(" ")).unwrap();
            writeln!(out, "alphabet: {}", join_chars(a.alphabet())).unwrap();
            writeln!(out, "initial: {}", name(a.initial())).unwrap();
            let finals: Vec<&str> = a.finals().into_iter().map(name).collect();
            writeln!(out, "final: {}", finals.join(" ")).unwrap();
            for (p, x, q, d) in a.transitions() {
                let sym = match x {
                    TapeSymbol::LeftEnd => "<".to_string(),
                    TapeSymbol::RightEnd => ">".to_string(),
                    TapeSymbol::Input(i) => a.alphabet()[i].to_string(),
                };
                writeln!(out, "trans: {} {sym} -> {} {}", name(p), name(q), d.as_char()).unwrap();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{random_1nfa, random_2nfa, GeneratorSpec};

    const SAMPLE: &str = "\
# always right
kind: 2nfa
states: s0 s1
alphabet: a b
initial: s0
final: s1
trans: s0 < -> s0 R
trans: s0 a -> s0 R   # trailing comment
trans: s0 b -> s0 R
trans: s0 > -> s1 R
";

    #[test]
    fn parses_sample() {
        let Automaton::TwoWay(a) = parse_automaton(SAMPLE).unwrap() else { panic!() };
        assert_eq!(a.num_states(), 2);
        assert!(crate::automata::accepts_2nfa(&a, &[0, 1, 0]).unwrap());
    }

    #[test]
    fn print_parse_round_trip() {
        for seed in 0..10 {
            for a in [
                Automaton::TwoWay(random_2nfa(&GeneratorSpec::new(3, 2, seed))),
                Automaton::OneWay(random_1nfa(&GeneratorSpec::new(3, 2, seed))),
            ] {
                let t = print_automaton(&a).unwrap();
                let b = parse_automaton(&t).unwrap();
                assert_eq!(print_automaton(&b).unwrap(), t);
            }
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = SAMPLE.replace("trans: s0 b -> s0 R", "trans: s0 c -> s0 R");
        let e = parse_automaton(&bad).unwrap_err().to_string();
        assert!(e.starts_with("line 9:"), "{e}");
        let bad = SAMPLE.replace("initial: s0", "start: s0");
        assert!(parse_automaton(&bad).unwrap_err().to_string().starts_with("line 5: unknown directive"));
        let bad = SAMPLE.replace("trans: s0 < -> s0 R", "trans: s0 < -> s0 L");
        assert!(matches!(parse_automaton(&bad), Err(FormatError::Automaton(_))));
    }
}
