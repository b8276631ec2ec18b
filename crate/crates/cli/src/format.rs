//! Line-oriented text formats for bases, certificates and words.
//!
//! Every file starts with a header line naming the kind and version, then
//! `n N`. Matrices are written as `2n` rows of `2n` decimal integers; row
//! `r` holds coordinate `r` (`p_1..p_n, q_1..q_n`) of every column
//! `x_1..x_n, x'_1..x'_n`. Indices in generator lines are one-based.
//!
//! ```text
//! orthobasis-certificate v1
//! n 1
//! reflections 1
//! 1 -1
//! ops 1
//! I 1
//! target
//! 0 -1
//! -1 0
//! ```
//!
//! Parsing ignores blank lines, lines starting with `#`, and runs of
//! whitespace; writing always produces the canonical form above.

use std::fmt::Write as _;

use orthobasis::{
    AmbientVector, Certificate, Generator, Int, IntMatrix, MoveWord, OrthogonalBasis, Sign,
};

pub const BASIS_HEADER: &str = "orthobasis-basis v1";
pub const CERTIFICATE_HEADER: &str = "orthobasis-certificate v1";
pub const WORD_HEADER: &str = "orthobasis-word v1";

/// Largest genus accepted by the parsers.
pub const MAX_GENUS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input, expected {expected}")]
    Eof { expected: String },
    #[error("invalid orthogonal basis: {0}")]
    Basis(#[from] orthobasis::BasisError),
    #[error("{0}")]
    Core(#[from] orthobasis::Error),
}

type Result<T> = std::result::Result<T, FormatError>;

type Tokenized<'a> = Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a>;

/// Non-empty, non-comment lines with their one-based line numbers.
struct Lines<'a> {
    inner: std::iter::Peekable<Tokenized<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Tokenized<'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(k, l)| (k + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
                .map(|(k, l)| (k, l.split_whitespace().collect())),
        );
        Lines { inner: it.peekable() }
    }

    fn next(&mut self, expected: &str) -> Result<(usize, Vec<&'a str>)> {
        self.inner.next().ok_or_else(|| FormatError::Eof { expected: expected.to_string() })
    }

    fn finish(mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((line, _)) => Err(syntax(line, "trailing content after the last section")),
        }
    }

    fn header(&mut self, header: &str) -> Result<()> {
        let (line, tokens) = self.next(header)?;
        if tokens.join(" ") != header {
            return Err(syntax(line, format!("expected header `{header}`")));
        }
        Ok(())
    }

    /// A `keyword value` line with a non-negative count.
    fn keyed(&mut self, keyword: &str) -> Result<(usize, usize)> {
        let (line, tokens) = self.next(&format!("`{keyword} <count>`"))?;
        match tokens.as_slice() {
            [k, value] if *k == keyword => value
                .parse::<usize>()
                .map(|v| (line, v))
                .map_err(|_| syntax(line, format!("`{value}` is not a valid count"))),
            _ => Err(syntax(line, format!("expected `{keyword} <count>`"))),
        }
    }

    fn genus(&mut self) -> Result<usize> {
        let (line, n) = self.keyed("n")?;
        if n == 0 || n > MAX_GENUS {
            return Err(syntax(line, format!("genus must be between 1 and {MAX_GENUS}")));
        }
        Ok(n)
    }

    fn keyword(&mut self, keyword: &str) -> Result<()> {
        let (line, tokens) = self.next(&format!("`{keyword}`"))?;
        if tokens.as_slice() != [keyword] {
            return Err(syntax(line, format!("expected `{keyword}`")));
        }
        Ok(())
    }

    fn integers(&mut self, count: usize, what: &str) -> Result<Vec<Int>> {
        let (line, tokens) = self.next(what)?;
        if tokens.len() != count {
            return Err(syntax(line, format!("expected {count} integers, found {}", tokens.len())));
        }
        tokens.iter().map(|t| integer(line, t)).collect()
    }

    fn matrix(&mut self, n: usize) -> Result<IntMatrix> {
        let rows = (0..2 * n)
            .map(|r| self.integers(2 * n, &format!("matrix row {}", r + 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_rows(&rows)?)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn integer(line: usize, token: &str) -> Result<Int> {
    let digits = token.strip_prefix(['-', '+']).unwrap_or(token);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, format!("`{token}` is not a decimal integer")));
    }
    token
        .parse::<Int>()
        .map_err(|_| syntax(line, format!("`{token}` does not fit in a signed 128-bit integer")))
}

fn index(line: usize, token: &str, n: usize) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(syntax(line, format!("index `{token}` is not in 1..={n}"))),
    }
}

fn sign(line: usize, token: &str) -> Result<Sign> {
    match token {
        "+1" | "1" => Ok(Sign::Plus),
        "-1" => Ok(Sign::Minus),
        _ => Err(syntax(line, format!("sign `{token}` must be +1 or -1"))),
    }
}

/// An `I i`, `II i j eps`, `III i j eps`, `IV i j eps` or `R c_1 .. c_2n`
/// line. Reflection vectors are not checked for self-pairing `-2`; that is
/// the verifier's job.
fn generator(line: usize, tokens: &[&str], n: usize, allow_reflection: bool) -> Result<Generator> {
    let shear = |kind: &str, rest: &[&str]| -> Result<(usize, usize, Sign)> {
        let [i, j, eps] = rest else {
            return Err(syntax(line, format!("`{kind}` takes two indices and a sign")));
        };
        let (i, j) = (index(line, i, n)?, index(line, j, n)?);
        if i == j {
            return Err(syntax(line, format!("`{kind}` needs distinct indices")));
        }
        Ok((i, j, sign(line, eps)?))
    };
    match tokens {
        ["I", i] => Ok(Generator::OpI { i: index(line, i, n)? }),
        ["I", ..] => Err(syntax(line, "`I` takes one index")),
        ["II", rest @ ..] => shear("II", rest).map(|(i, j, eps)| Generator::OpII { i, j, eps }),
        ["III", rest @ ..] => shear("III", rest).map(|(i, j, eps)| Generator::OpIII { i, j, eps }),
        ["IV", rest @ ..] => shear("IV", rest).map(|(i, j, eps)| Generator::OpIV { i, j, eps }),
        ["R", coords @ ..] if allow_reflection => Ok(Generator::Reflection(vector(line, coords, n)?)),
        _ => Err(syntax(line, "expected a generator line (I, II, III, IV or R)")),
    }
}

fn vector(line: usize, tokens: &[&str], n: usize) -> Result<AmbientVector> {
    if tokens.len() != 2 * n {
        return Err(syntax(line, format!("expected {} coordinates, found {}", 2 * n, tokens.len())));
    }
    let coords = tokens.iter().map(|t| integer(line, t)).collect::<Result<Vec<_>>>()?;
    Ok(AmbientVector::from_coords(coords)?)
}

/// Parses a basis file into its raw matrix, without validating it.
pub fn parse_basis_matrix(text: &str) -> Result<IntMatrix> {
    let mut lines = Lines::new(text);
    lines.header(BASIS_HEADER)?;
    let n = lines.genus()?;
    let m = lines.matrix(n)?;
    lines.finish()?;
    Ok(m)
}

/// Parses and validates a basis file.
pub fn parse_basis(text: &str) -> Result<OrthogonalBasis> {
    Ok(orthobasis::validate_orthogonal_basis(&parse_basis_matrix(text)?)?)
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut lines = Lines::new(text);
    lines.header(CERTIFICATE_HEADER)?;
    let n = lines.genus()?;
    let (_, count) = lines.keyed("reflections")?;
    let mut reflection_stage = Vec::new();
    for k in 0..count {
        let (line, tokens) = lines.next(&format!("reflection vector {}", k + 1))?;
        reflection_stage.push(vector(line, &tokens, n)?);
    }
    let (_, count) = lines.keyed("ops")?;
    let mut ops = MoveWord::new();
    for k in 0..count {
        let (line, tokens) = lines.next(&format!("operation {}", k + 1))?;
        ops.push(generator(line, &tokens, n, false)?);
    }
    lines.keyword("target")?;
    let target = orthobasis::validate_orthogonal_basis(&lines.matrix(n)?)?;
    lines.finish()?;
    Ok(Certificate { n, reflection_stage, op_stage: ops, target })
}

pub fn parse_word(text: &str) -> Result<(usize, MoveWord)> {
    let mut lines = Lines::new(text);
    lines.header(WORD_HEADER)?;
    let n = lines.genus()?;
    let (_, count) = lines.keyed("length")?;
    let mut word = MoveWord::new();
    for k in 0..count {
        let (line, tokens) = lines.next(&format!("generator {}", k + 1))?;
        word.push(generator(line, &tokens, n, true)?);
    }
    lines.finish()?;
    Ok((n, word))
}

fn write_integers(out: &mut String, values: impl IntoIterator<Item = Int>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}

fn write_matrix(out: &mut String, m: &IntMatrix) {
    for r in 0..m.rows() {
        write_integers(out, m.row(r).iter().copied());
    }
}

fn write_generator(out: &mut String, g: &Generator) {
    let signed = |eps: &Sign| if *eps == Sign::Plus { "+1" } else { "-1" };
    match g {
        Generator::OpI { i } => {
            let _ = writeln!(out, "I {}", i + 1);
        }
        Generator::OpII { i, j, eps }
        | Generator::OpIII { i, j, eps }
        | Generator::OpIV { i, j, eps } => {
            let _ = writeln!(out, "{} {} {} {}", g.kind(), i + 1, j + 1, signed(eps));
        }
        Generator::Reflection(v) => {
            out.push_str("R ");
            write_integers(out, v.coords().iter().copied());
        }
    }
}

pub fn write_basis(basis: &OrthogonalBasis) -> String {
    let mut out = format!("{BASIS_HEADER}\nn {}\n", basis.n());
    write_matrix(&mut out, basis.matrix());
    out
}

pub fn write_certificate(cert: &Certificate) -> String {
    let mut out = format!("{CERTIFICATE_HEADER}\nn {}\n", cert.n);
    let _ = writeln!(out, "reflections {}", cert.reflection_stage.len());
    for v in &cert.reflection_stage {
        write_integers(&mut out, v.coords().iter().copied());
    }
    let _ = writeln!(out, "ops {}", cert.op_stage.len());
    for g in &cert.op_stage {
        write_generator(&mut out, g);
    }
    out.push_str("target\n");
    write_matrix(&mut out, cert.target.matrix());
    out
}

pub fn write_word(n: usize, word: &MoveWord) -> String {
    let mut out = format!("{WORD_HEADER}\nn {n}\nlength {}\n", word.len());
    for g in word {
        write_generator(&mut out, g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWAP: &str = "orthobasis-certificate v1\nn 1\nreflections 1\n1 -1\nops 1\nI 1\ntarget\n0 -1\n-1 0\n";

    #[test]
    fn certificate_round_trips() {
        let cert = parse_certificate(SWAP).unwrap();
        assert_eq!(cert.reflection_stage.len(), 1);
        assert_eq!(cert.op_stage.as_slice(), &[Generator::OpI { i: 0 }]);
        assert_eq!(write_certificate(&cert), SWAP);
    }

    #[test]
    fn lenient_whitespace_and_comments() {
        let text = "# swap\northobasis-basis   v1\n\nn 1\n 0  1 \n1 0\n";
        let basis = parse_basis(text).unwrap();
        assert_eq!(write_basis(&basis), "orthobasis-basis v1\nn 1\n0 1\n1 0\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "orthobasis-basis v1\nn 1\n1 0\n0 x\n";
        assert_eq!(
            parse_basis(text),
            Err(FormatError::Syntax { line: 4, message: "`x` is not a decimal integer".into() })
        );
        let text = "orthobasis-basis v1\nn 1\n1 0\n";
        assert!(matches!(parse_basis(text), Err(FormatError::Eof { .. })));
    }

    #[test]
    fn oversized_integers_are_rejected() {
        let big = "170141183460469231731687303715884105728";
        let text = format!("orthobasis-basis v1\nn 1\n{big} 0\n0 1\n");
        let err = parse_basis(&text).unwrap_err();
        assert!(err.to_string().contains("128-bit"), "{err}");
        let max = "170141183460469231731687303715884105727";
        let text = format!("orthobasis-basis v1\nn 1\n{max} 0\n0 1\n");
        assert!(parse_basis_matrix(&text).is_ok());
    }

    #[test]
    fn generator_lines() {
        let text = "orthobasis-word v1\nn 3\nlength 5\nI 2\nII 1 3 +1\nIII 3 2 -1\nIV 2 1 +1\nR 1 0 0 -1 0 0\n";
        let (n, word) = parse_word(text).unwrap();
        assert_eq!(n, 3);
        assert_eq!(word.len(), 5);
        assert_eq!(write_word(n, &word), text);
        for bad in ["I 4", "II 1 1 +1", "II 1 2 +2", "IV 1 2", "V 1 2 +1", "R 1 0"] {
            let text = format!("orthobasis-word v1\nn 3\nlength 1\n{bad}\n");
            assert!(matches!(parse_word(&text), Err(FormatError::Syntax { line: 4, .. })), "{bad}");
        }
    }

    #[test]
    fn reflections_rejected_in_op_stage() {
        let text = SWAP.replace("I 1\ntarget", "R 1 -1\ntarget");
        assert!(matches!(parse_certificate(&text), Err(FormatError::Syntax { line: 6, .. })));
    }

    #[test]
    fn invalid_target_is_a_basis_error() {
        let text = SWAP.replace("0 -1\n-1 0\n", "1 0\n0 2\n");
        assert!(matches!(parse_certificate(&text), Err(FormatError::Basis(_))));
    }

    #[test]
    fn trailing_content_rejected() {
        let text = format!("{SWAP}extra\n");
        assert!(matches!(parse_certificate(&text), Err(FormatError::Syntax { line: 10, .. })));
    }
}
