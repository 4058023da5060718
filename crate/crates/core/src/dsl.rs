//! Text formats: the `.pn` net language, brace marking literals, property
//! files, and Graphviz export.
//!
//! ```text
//! net fig1 {
//!   places { p0 = 2; p1 = 3; p2; }
//!   transitions { t0; }
//!   arcs {
//!     p0 -> t0;       # input arc, weight 1
//!     p1 -3-> t0;     # input arc, weight 3
//!     t0 -2-> p2;     # output arc, weight 2
//!   }
//! }
//! ```
//!
//! A read arc is written `p ..> t` or `p ..N..> t`.

use std::collections::HashSet;
use std::fmt::Write;

use crate::ctl::{self, Formula};
use crate::lex::{Cursor, ParseError, Pos, Tok};
use crate::net::{ArcKind, Marking, Net, NetBuilder, NetError};

fn at(pos: Pos) -> impl FnOnce(NetError) -> ParseError {
    move |e| ParseError::new(pos, e.to_string())
}

pub fn parse_net(text: &str) -> Result<Net, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.keyword("net")?;
    let (name, _) = cur.ident()?;
    cur.expect(&Tok::LBrace)?;
    let mut b = NetBuilder::new(name);

    cur.keyword("places")?;
    cur.expect(&Tok::LBrace)?;
    while !cur.eat(&Tok::RBrace) {
        let (place, pos) = cur.ident()?;
        let tokens = if cur.eat(&Tok::Eq) { cur.nat()?.0 } else { 0 };
        cur.expect(&Tok::Semi)?;
        b.place(&place, tokens).map_err(at(pos))?;
    }

    cur.keyword("transitions")?;
    cur.expect(&Tok::LBrace)?;
    while !cur.eat(&Tok::RBrace) {
        let (t, pos) = cur.ident()?;
        cur.expect(&Tok::Semi)?;
        b.transition(&t).map_err(at(pos))?;
    }

    cur.keyword("arcs")?;
    cur.expect(&Tok::LBrace)?;
    while !cur.eat(&Tok::RBrace) {
        parse_arc(&mut cur, &mut b)?;
        cur.expect(&Tok::Semi)?;
    }

    cur.expect(&Tok::RBrace)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(b.build())
}

fn parse_arc(cur: &mut Cursor, b: &mut NetBuilder) -> Result<(), ParseError> {
    let (src, src_pos) = cur.ident()?;
    let arrow_pos = cur.pos();
    let (read, weight) = match cur.next().tok {
        Tok::Arrow => (false, 1),
        Tok::ReadArrow => (true, 1),
        Tok::Dash => {
            let (w, _) = cur.nat()?;
            cur.expect(&Tok::Arrow)?;
            (false, w)
        }
        Tok::DotDot => {
            let (w, _) = cur.nat()?;
            cur.expect(&Tok::ReadArrow)?;
            (true, w)
        }
        other => {
            return Err(ParseError::new(
                arrow_pos,
                format!("expected an arc (`->`, `-N->`, `..>` or `..N..>`), found {other}"),
            ))
        }
    };
    let (dst, dst_pos) = cur.ident()?;
    if weight == 0 {
        return Err(ParseError::new(arrow_pos, "arc weight must be at least 1"));
    }

    let unknown = |name: &str, pos| ParseError::new(pos, format!("unknown place or transition `{name}`"));
    let (p, t, kind) = match (b.place_id(&src), b.transition_id(&src)) {
        (Some(p), _) => {
            let t = match (b.transition_id(&dst), b.place_id(&dst)) {
                (Some(t), _) => t,
                (None, Some(_)) => {
                    return Err(ParseError::new(
                        dst_pos,
                        format!("arc from place `{src}` must end at a transition, `{dst}` is a place"),
                    ))
                }
                (None, None) => return Err(unknown(&dst, dst_pos)),
            };
            (p, t, if read { ArcKind::Read } else { ArcKind::Input })
        }
        (None, Some(t)) => {
            if read {
                return Err(ParseError::new(arrow_pos, "read arcs go from a place to a transition"));
            }
            let p = match (b.place_id(&dst), b.transition_id(&dst)) {
                (Some(p), _) => p,
                (None, Some(_)) => {
                    return Err(ParseError::new(
                        dst_pos,
                        format!("arc from transition `{src}` must end at a place, `{dst}` is a transition"),
                    ))
                }
                (None, None) => return Err(unknown(&dst, dst_pos)),
            };
            (p, t, ArcKind::Output)
        }
        (None, None) => return Err(unknown(&src, src_pos)),
    };
    b.arc(p, t, kind, weight).map_err(at(arrow_pos))
}

/// Canonical text for `net`: declaration order, weight 1 elided, read arcs
/// as `..>`.
pub fn serialize_net(net: &Net) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "net {} {{", net.name());

    if net.place_count() == 0 {
        out.push_str("  places {}\n");
    } else {
        out.push_str("  places {\n");
        let m0 = net.initial_marking();
        for p in net.places() {
            match m0.get(p) {
                0 => {
                    let _ = writeln!(out, "    {};", net.place_name(p));
                }
                n => {
                    let _ = writeln!(out, "    {} = {};", net.place_name(p), n);
                }
            }
        }
        out.push_str("  }\n");
    }

    if net.transition_count() == 0 {
        out.push_str("  transitions {}\n");
    } else {
        out.push_str("  transitions {\n");
        for t in net.transitions() {
            let _ = writeln!(out, "    {};", net.transition_name(t));
        }
        out.push_str("  }\n");
    }

    if net.arcs().is_empty() {
        out.push_str("  arcs {}\n");
    } else {
        out.push_str("  arcs {\n");
        for a in net.arcs() {
            let p = net.place_name(a.place);
            let t = net.transition_name(a.transition);
            let w = a.weight;
            let _ = match (a.kind, w) {
                (ArcKind::Input, 1) => writeln!(out, "    {p} -> {t};"),
                (ArcKind::Input, _) => writeln!(out, "    {p} -{w}-> {t};"),
                (ArcKind::Output, 1) => writeln!(out, "    {t} -> {p};"),
                (ArcKind::Output, _) => writeln!(out, "    {t} -{w}-> {p};"),
                (ArcKind::Read, 1) => writeln!(out, "    {p} ..> {t};"),
                (ArcKind::Read, _) => writeln!(out, "    {p} ..{w}..> {t};"),
            };
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// Parses a brace literal such as `{2 p0, 3 p1}` against `net`.
pub fn parse_marking(net: &Net, text: &str) -> Result<Marking, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.expect(&Tok::LBrace)?;
    let mut m = Marking::zero(net.place_count());
    let mut seen = HashSet::new();
    if !cur.eat(&Tok::RBrace) {
        loop {
            let count_pos = cur.pos();
            let count = match *cur.peek() {
                Tok::Nat(n) => {
                    cur.next();
                    if n == 0 {
                        return Err(ParseError::new(count_pos, "listed token counts must be at least 1"));
                    }
                    n
                }
                _ => 1,
            };
            let (name, pos) = cur.ident()?;
            let p = net.place_id(&name).ok_or_else(|| ParseError::new(pos, format!("unknown place `{name}`")))?;
            if !seen.insert(p) {
                return Err(ParseError::new(pos, format!("place `{name}` listed twice")));
            }
            m.set(p, count);
            if cur.eat(&Tok::RBrace) {
                break;
            }
            cur.expect(&Tok::Comma)?;
        }
    }
    if !cur.at_end() {
        return Err(cur.unexpected("end of input"));
    }
    Ok(m)
}

/// Brace notation ordered by place index; zero counts omitted, count 1 elided.
pub fn format_marking(net: &Net, m: &Marking) -> String {
    net.display_marking(m).to_string()
}

/// One `NAME : FORMULA` entry of a property file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub formula: Formula,
    pub line: usize,
}

/// Parses a property file: one `NAME : FORMULA` per line, `#` comments and
/// blank lines ignored. Names must be unique.
pub fn parse_properties(text: &str) -> Result<Vec<Property>, ParseError> {
    let mut out: Vec<Property> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let relocate = |mut e: ParseError| {
            e.pos.line = line_no;
            e
        };
        let mut cur = Cursor::new(line).map_err(relocate)?;
        if cur.at_end() {
            continue;
        }
        let (name, pos) = cur.ident().map_err(relocate)?;
        cur.expect(&Tok::Colon).map_err(relocate)?;
        let formula = ctl::parse_formula_tokens(&mut cur).map_err(relocate)?;
        if out.iter().any(|p| p.name == name) {
            return Err(ParseError::new(
                Pos { line: line_no, column: pos.column },
                format!("property `{name}` defined twice"),
            ));
        }
        out.push(Property { name, formula, line: line_no });
    }
    Ok(out)
}

pub fn serialize_properties<'a>(props: impl IntoIterator<Item = (&'a str, &'a Formula)>) -> String {
    let mut out = String::new();
    for (name, f) in props {
        let _ = writeln!(out, "{name} : {f}");
    }
    out
}

/// Graphviz rendering: places are circles labelled with their token count,
/// transitions are boxes, read arcs are dashed with a dot at the place end.
pub fn to_dot(net: &Net, m: &Marking) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", net.name());
    out.push_str("  rankdir=LR;\n");
    for p in net.places() {
        let name = net.place_name(p);
        let label = match m.get(p) {
            0 => name.to_owned(),
            n => format!("{name}\\n{n}"),
        };
        let _ = writeln!(out, "  \"{name}\" [shape=circle, label=\"{label}\"];");
    }
    for t in net.transitions() {
        let name = net.transition_name(t);
        let _ = writeln!(out, "  \"{name}\" [shape=box, label=\"{name}\"];");
    }
    for a in net.arcs() {
        let p = net.place_name(a.place);
        let t = net.transition_name(a.transition);
        let mut attrs = Vec::new();
        if a.weight != 1 {
            attrs.push(format!("label=\"{}\"", a.weight));
        }
        let (from, to) = match a.kind {
            ArcKind::Input => (p, t),
            ArcKind::Output => (t, p),
            ArcKind::Read => {
                attrs.push("style=dashed, dir=both, arrowtail=dot, arrowhead=none".to_owned());
                (p, t)
            }
        };
        if attrs.is_empty() {
            let _ = writeln!(out, "  \"{from}\" -> \"{to}\";");
        } else {
            let _ = writeln!(out, "  \"{from}\" -> \"{to}\" [{}];", attrs.join(", "));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "
        net fig1 {
          places { p0 = 2; p1 = 3; p2; }
          transitions { t0; }
          arcs { p0 -> t0; p1 -3-> t0; t0 -2-> p2; }
        }";

    #[test]
    fn parses_weighted_net() {
        let net = parse_net(FIG1).unwrap();
        assert_eq!(net.place_count(), 3);
        assert_eq!(net.transition_count(), 1);
        assert_eq!(format_marking(&net, net.initial_marking()), "{2 p0, 3 p1}");
        let t0 = net.transition("t0").unwrap();
        assert_eq!(net.input_weight(net.place("p1").unwrap(), t0), 3);
        assert_eq!(net.output_weight(t0, net.place("p2").unwrap()), 2);
    }

    #[test]
    fn empty_body() {
        let net = parse_net("net e { places{} transitions{} arcs{} }").unwrap();
        assert_eq!(net.place_count(), 0);
        assert_eq!(net.transition_count(), 0);
        assert!(net.initial_marking().is_empty());
        assert_eq!(parse_net(&serialize_net(&net)).unwrap(), net);
    }

    #[test]
    fn unknown_name_is_located() {
        let text = "net x {\n places { p0; }\n transitions { t0; }\n arcs { p9 -> t0; }\n}";
        let e = parse_net(text).unwrap_err();
        assert_eq!(e.pos, Pos { line: 4, column: 9 });
        assert!(e.message.contains("p9"), "{}", e.message);
    }

    #[test]
    fn structural_errors() {
        let cases = [
            ("net x { places { p; p; } transitions {} arcs {} }", "duplicate place"),
            ("net x { places { p; } transitions { p; } arcs {} }", "both as a place"),
            ("net x { places { p; } transitions { t; } arcs { p -0-> t; } }", "at least 1"),
            ("net x { places { p; } transitions { t; } arcs { p -> t; p ..> t; } }", "input arc and a read arc"),
            ("net x { places { p; } transitions { t; } arcs { t ..> p; } }", "read arcs go"),
            ("net x { places { p; q; } transitions { t; } arcs { p -> q; } }", "is a place"),
            ("net x { places { p; } transitions { t; } arcs { p -> t } }", "expected `;`"),
            ("net x { places { p; } transitions { t; } arcs { } } extra", "end of input"),
        ];
        for (text, needle) in cases {
            let e = parse_net(text).unwrap_err();
            assert!(e.message.contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn canonical_serialization() {
        let text = "net fig2 { places { p1 = 1; p2 = 1; p3; } transitions { t2; }
                    arcs { p1 ..> t2; p2 -> t2; t2 -> p3; } }";
        let net = parse_net(text).unwrap();
        let s = serialize_net(&net);
        assert!(s.contains("    p1 ..> t2;\n"), "{s}");
        assert!(s.contains("    p2 -> t2;\n"), "{s}");
        assert_eq!(parse_net(&s).unwrap(), net);

        let fig1 = serialize_net(&parse_net(FIG1).unwrap());
        assert_eq!(
            fig1,
            "net fig1 {\n  places {\n    p0 = 2;\n    p1 = 3;\n    p2;\n  }\n  transitions {\n    t0;\n  }\n  arcs {\n    p0 -> t0;\n    p1 -3-> t0;\n    t0 -2-> p2;\n  }\n}\n"
        );
    }

    #[test]
    fn weighted_read_arc_round_trip() {
        let text = "net r { places { p = 2; } transitions { t; } arcs { p ..2..> t; } }";
        let net = parse_net(text).unwrap();
        assert!(serialize_net(&net).contains("p ..2..> t;"));
        assert_eq!(parse_net(&serialize_net(&net)).unwrap(), net);
    }

    #[test]
    fn marking_literals() {
        let net = parse_net(FIG1).unwrap();
        let m = parse_marking(&net, "{2 p0, 3 p1}").unwrap();
        assert_eq!(m.counts(), &[2, 3, 0]);
        assert_eq!(parse_marking(&net, "{}").unwrap().counts(), &[0, 0, 0]);
        let m = net.marking([("p0", 1), ("p2", 2)]).unwrap();
        assert_eq!(format_marking(&net, &m), "{p0, 2 p2}");
        assert_eq!(format_marking(&net, &parse_marking(&net, "{ 2 p2 ,p0 }").unwrap()), "{p0, 2 p2}");

        for (text, needle) in [
            ("{p7}", "unknown place"),
            ("{p0, p0}", "listed twice"),
            ("{0 p0}", "at least 1"),
            ("{2}", "identifier"),
            ("{p0 p1}", "`,`"),
            ("p0", "`{`"),
        ] {
            let e = parse_marking(&net, text).unwrap_err();
            assert!(e.message.contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn property_files() {
        let text = "# scenario\n\nsafe : AG !deadlock\nidle: EF tokens(p2) = 1 # comment\n";
        let props = parse_properties(text).unwrap();
        assert_eq!(props.len(), 2);
        assert_eq!(props[0].name, "safe");
        assert_eq!(props[1].line, 4);
        let again =
            parse_properties(&serialize_properties(props.iter().map(|p| (p.name.as_str(), &p.formula)))).unwrap();
        assert_eq!(
            again.iter().map(|p| &p.formula).collect::<Vec<_>>(),
            props.iter().map(|p| &p.formula).collect::<Vec<_>>()
        );

        let e = parse_properties("a : true\nb : EF (\n").unwrap_err();
        assert_eq!(e.pos.line, 2);
        let e = parse_properties("a : true\na : false\n").unwrap_err();
        assert!(e.message.contains("twice"));
    }

    #[test]
    fn dot_export() {
        let net = parse_net(FIG1).unwrap();
        let dot = to_dot(&net, net.initial_marking());
        assert_eq!(dot.matches("shape=circle").count(), 3);
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert_eq!(dot.matches(" -> ").count(), 3);
        assert!(dot.contains("label=\"3\""));
        assert!(dot.contains("label=\"2\""));
        assert!(dot.contains("label=\"p0\\n2\""));
        assert_eq!(dot, to_dot(&net, net.initial_marking()));

        let empty = parse_net("net e { places{} transitions{} arcs{} }").unwrap();
        assert_eq!(to_dot(&empty, empty.initial_marking()), "digraph \"e\" {\n  rankdir=LR;\n}\n");

        let read = parse_net("net r { places { p = 1; } transitions { t; } arcs { p ..> t; } }").unwrap();
        assert!(to_dot(&read, read.initial_marking()).contains("\"p\" -> \"t\" [style=dashed"));
    }
}
