//! Textual serialization of tensor expressions.
//!
//! One monomial per line in a parenthesized prefix format:
//!
//! ```text
//! (* (coef 3 1) (scal m^2 eps^-1) (fac eta up.mu up.nu) (fac h dn.mu dn.nu der dn.al))
//! ```
//!
//! Dummy indices print as `$0`, `$1`, ... per monomial; anything else is a
//! free label. Lines are emitted in sorted byte order, so parse followed by
//! print is bit-exact on files this crate writes, independent of interning
//! history. `#` starts a comment line; blank lines are skipped.

use super::factor::{Factor, Head};
use super::index::{intern_label, label_name, IName, Idx};
use super::mono::{Expr, Mono};
use super::num::Q;
use super::sym::ScalMono;
use super::ExprError;
use std::collections::HashMap;

pub fn print_expr(e: &Expr) -> String {
    let mut lines: Vec<String> = e.terms.iter().map(print_mono).collect();
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

fn print_mono(m: &Mono) -> String {
    let mut s = String::from("(* ");
    s.push_str(&format!("(coef {} {})", m.coef.numer(), m.coef.denom()));
    s.push_str(" (scal");
    for t in m.scal.to_tokens() {
        s.push(' ');
        s.push_str(&t);
    }
    s.push(')');
    for f in &m.facs {
        assert!(!matches!(f.head, Head::Mark(_)), "markers are internal and never serialized");
        s.push_str(" (fac ");
        s.push_str(&f.head.name());
        for i in &f.slots {
            s.push(' ');
            s.push_str(&fmt_idx(*i));
        }
        if !f.ders.is_empty() {
            s.push_str(" der");
            for i in &f.ders {
                s.push(' ');
                s.push_str(&fmt_idx(*i));
            }
        }
        s.push(')');
    }
    s.push(')');
    s
}

pub(crate) fn fmt_idx(i: Idx) -> String {
    let var = if i.up { "up" } else { "dn" };
    match i.name {
        IName::Free(l) => format!("{var}.{}", label_name(l)),
        IName::Bond(b) => format!("{var}.${b}"),
    }
}

/// Parses the textual format. The result is raw (not canonicalized); index
/// labels occurring twice in a monomial become dummies, labels occurring
/// once are free, and a third occurrence is an error.
pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    let mut terms = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        terms.push(parse_mono(line, ln + 1)?);
    }
    Ok(Expr::from_monos(terms))
}

fn perr(line: usize, msg: impl Into<String>) -> ExprError {
    ExprError::Parse { line, msg: msg.into() }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(Tok::Atom(std::mem::take(&mut cur)));
                }
                out.push(if ch == '(' { Tok::Open } else { Tok::Close });
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(Tok::Atom(std::mem::take(&mut cur)));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(Tok::Atom(cur));
    }
    let _ = line;
    Ok(out)
}

/// Group = parenthesized list of atoms (one nesting level only).
fn split_groups(toks: &[Tok], line: usize) -> Result<Vec<Vec<String>>, ExprError> {
    let mut groups = Vec::new();
    let mut cur: Option<Vec<String>> = None;
    for t in toks {
        match t {
            Tok::Open => {
                if cur.is_some() {
                    return Err(perr(line, "unexpected nested group"));
                }
                cur = Some(Vec::new());
            }
            Tok::Close => {
                let g = cur.take().ok_or_else(|| perr(line, "unbalanced parenthesis"))?;
                groups.push(g);
            }
            Tok::Atom(a) => match &mut cur {
                Some(g) => g.push(a.clone()),
                None => return Err(perr(line, format!("stray atom `{a}`"))),
            },
        }
    }
    if cur.is_some() {
        return Err(perr(line, "unbalanced parenthesis"));
    }
    Ok(groups)
}

fn parse_mono(line_text: &str, line: usize) -> Result<Mono, ExprError> {
    let toks = tokenize(line_text, line)?;
    if toks.first() != Some(&Tok::Open) || toks.get(1) != Some(&Tok::Atom("*".into())) {
        return Err(perr(line, "monomial must start with `(*`"));
    }
    if toks.last() != Some(&Tok::Close) {
        return Err(perr(line, "monomial must end with `)`"));
    }
    let inner = &toks[2..toks.len() - 1];
    let groups = split_groups(inner, line)?;
    if groups.len() < 2 {
        return Err(perr(line, "expected (coef ..) and (scal ..) groups"));
    }

    // coefficient
    let g0 = &groups[0];
    if g0.len() != 3 || g0[0] != "coef" {
        return Err(perr(line, "expected (coef NUM DEN)"));
    }
    let n: i128 = g0[1].parse().map_err(|_| perr(line, "bad coefficient numerator"))?;
    let d: i128 = g0[2].parse().map_err(|_| perr(line, "bad coefficient denominator"))?;
    if d == 0 {
        return Err(perr(line, "zero coefficient denominator"));
    }
    let coef = Q::new(n, d);

    // scalar monomial
    let g1 = &groups[1];
    if g1.first().map(String::as_str) != Some("scal") {
        return Err(perr(line, "expected (scal ..) group"));
    }
    let mut scal = ScalMono::one();
    for tok in &g1[1..] {
        let (s, e) = ScalMono::parse_token(tok)
            .ok_or_else(|| perr(line, format!("bad scalar token `{tok}`")))?;
        scal.mul_sym(s, e);
    }

    // factors, with per-monomial label resolution
    let mut raw_facs: Vec<(Head, Vec<(String, bool)>, Vec<(String, bool)>)> = Vec::new();
    for g in &groups[2..] {
        if g.first().map(String::as_str) != Some("fac") {
            return Err(perr(line, "expected (fac ..) group"));
        }
        if g.len() < 2 {
            return Err(perr(line, "factor needs a head"));
        }
        let head = Head::parse(&g[1]).ok_or_else(|| perr(line, format!("unknown head `{}`", g[1])))?;
        let mut slots = Vec::new();
        let mut ders = Vec::new();
        let mut in_ders = false;
        for tok in &g[2..] {
            if tok == "der" {
                if in_ders {
                    return Err(perr(line, "duplicate der section"));
                }
                in_ders = true;
                continue;
            }
            let (var, label) = tok
                .split_once('.')
                .ok_or_else(|| perr(line, format!("bad index token `{tok}`")))?;
            let up = match var {
                "up" => true,
                "dn" => false,
                _ => return Err(perr(line, format!("bad variance `{var}`"))),
            };
            if in_ders {
                ders.push((label.to_string(), up));
            } else {
                slots.push((label.to_string(), up));
            }
        }
        if in_ders && ders.is_empty() {
            return Err(perr(line, "empty der section"));
        }
        raw_facs.push((head, slots, ders));
    }

    // label occurrence counting: once = free, twice = dummy, more = error
    let mut occ: HashMap<&str, Vec<bool>> = HashMap::new();
    for (_, slots, ders) in &raw_facs {
        for (l, up) in slots.iter().chain(ders.iter()) {
            occ.entry(l.as_str()).or_default().push(*up);
        }
    }
    for (l, ups) in &occ {
        if ups.len() > 2 {
            return Err(ExprError::TripleIndex(format!("{l} (line {line})")));
        }
        if l.starts_with('$') && ups.len() != 2 {
            return Err(perr(line, format!("dummy label `{l}` must occur exactly twice")));
        }
        if ups.len() == 2 && ups[0] == ups[1] {
            return Err(perr(
                line,
                format!("dummy `{l}` must occur once upper and once lower"),
            ));
        }
    }
    let occ: HashMap<&str, u32> =
        occ.into_iter().map(|(l, ups)| (l, ups.len() as u32)).collect();
    let mut bond_ids: HashMap<String, u32> = HashMap::new();
    let mut resolve = |label: &str, up: bool| -> Idx {
        if occ[label] == 2 {
            let next = bond_ids.len() as u32;
            let id = *bond_ids.entry(label.to_string()).or_insert(next);
            Idx::bond(id, up)
        } else {
            Idx::free(intern_label(label), up)
        }
    };
    let mut facs = Vec::with_capacity(raw_facs.len());
    for (head, slots, ders) in &raw_facs {
        let s: Vec<Idx> = slots.iter().map(|(l, u)| resolve(l, *u)).collect();
        let d: Vec<Idx> = ders.iter().map(|(l, u)| resolve(l, *u)).collect();
        let f = Factor::with_ders(*head, &s, &d);
        if !f.well_formed() {
            return Err(perr(
                line,
                format!("factor `{}` has wrong arity or illegal derivatives", head.name()),
            ));
        }
        facs.push(f);
    }
    Ok(Mono::new(coef, scal, facs))
}
