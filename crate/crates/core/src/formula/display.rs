use super::{Formula, Kind};

/// Output alphabet for [`format_formula`]. Only `Ascii` reparses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Notation {
    #[default]
    Ascii,
    Unicode,
}

struct Symbols {
    not: &'static str,
    and: &'static str,
    or: &'static str,
    implies: &'static str,
    iff: &'static str,
    top: &'static str,
    bottom: &'static str,
}

const ASCII: Symbols = Symbols {
    not: "~",
    and: " & ",
    or: " | ",
    implies: " -> ",
    iff: " <-> ",
    top: "true",
    bottom: "false",
};

const UNICODE: Symbols = Symbols {
    not: "¬",
    and: " ∧ ",
    or: " ∨ ",
    implies: " → ",
    iff: " ↔ ",
    top: "⊤",
    bottom: "⊥",
};

const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNTIL: u8 = 5;
const PREC_UNARY: u8 = 6;

fn precedence(f: Formula) -> u8 {
    match f.kind() {
        Kind::Iff(..) => PREC_IFF,
        Kind::Implies(..) => PREC_IMPLIES,
        Kind::Or(..) => PREC_OR,
        Kind::And(..) => PREC_AND,
        Kind::Until(..) => PREC_UNTIL,
        _ => PREC_UNARY,
    }
}

/// Prints with the minimum parentheses the parser needs to rebuild `f`.
pub fn format_formula(f: Formula, notation: Notation) -> String {
    let symbols = match notation {
        Notation::Ascii => &ASCII,
        Notation::Unicode => &UNICODE,
    };
    let mut out = String::new();
    write(f, 0, symbols, &mut out);
    out
}

fn write(f: Formula, min: u8, sym: &Symbols, out: &mut String) {
    let prec = precedence(f);
    let wrap = prec < min;
    if wrap {
        out.push('(');
    }
    match *f.kind() {
        Kind::Atom(ref name) => out.push_str(name),
        Kind::True => out.push_str(sym.top),
        Kind::False => out.push_str(sym.bottom),
        Kind::Not(a) => {
            out.push_str(sym.not);
            write(a, PREC_UNARY, sym, out);
        }
        Kind::Next(a) => temporal("X", a, sym, out),
        Kind::Finally(a) => temporal("F", a, sym, out),
        Kind::Globally(a) => temporal("G", a, sym, out),
        Kind::And(a, b) => binary(a, b, sym.and, PREC_AND, PREC_AND + 1, sym, out),
        Kind::Or(a, b) => binary(a, b, sym.or, PREC_OR, PREC_OR + 1, sym, out),
        Kind::Implies(a, b) => {
            binary(a, b, sym.implies, PREC_IMPLIES + 1, PREC_IMPLIES, sym, out)
        }
        Kind::Iff(a, b) => binary(a, b, sym.iff, PREC_IFF + 1, PREC_IFF, sym, out),
        Kind::Until(a, b) => binary(a, b, " U ", PREC_UNTIL + 1, PREC_UNTIL, sym, out),
    }
    if wrap {
        out.push(')');
    }
}

fn temporal(op: &str, operand: Formula, sym: &Symbols, out: &mut String) {
    out.push_str(op);
    let mut inner = String::new();
    write(operand, PREC_UNARY, sym, &mut inner);
    if !(inner.starts_with('(') || inner.starts_with(sym.not)) {
        out.push(' ');
    }
    out.push_str(&inner);
}

fn binary(
    a: Formula,
    b: Formula,
    op: &str,
    left_min: u8,
    right_min: u8,
    sym: &Symbols,
    out: &mut String,
) {
    write(a, left_min, sym, out);
    out.push_str(op);
    write(b, right_min, sym, out);
}
