use serde::{Deserialize, Serialize};

use super::{BraidLetter, BraidWord, Sign, Slice, SliceWord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Braid,
    Slice,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses whitespace-separated nonzero integers as braid letters.
pub fn parse_braid(text: &str, strands: i64) -> Result<BraidWord> {
    if strands < 1 {
        return Err(Error::NoStrands(strands));
    }
    let b = strands as usize;
    let mut letters = Vec::new();
    for token in text.split(|c: char| c.is_whitespace() || c == ',') {
        if token.is_empty() {
            continue;
        }
        let v: i64 = token.parse().map_err(|_| Error::BadToken {
            token: token.to_string(),
        })?;
        if v == 0 {
            return Err(Error::BadToken {
                token: token.to_string(),
            });
        }
        if v.unsigned_abs() as usize >= b {
            return Err(Error::LetterOutOfRange { letter: v, strands: b });
        }
        let sign = if v > 0 { Sign::Positive } else { Sign::Negative };
        letters.push(BraidLetter::new(v.unsigned_abs() as usize, sign));
    }
    BraidWord::new(b, letters)
}

/// Braid file: the first content line holds the strand count, the remaining
/// content lines hold the letters.
pub fn parse_braid_file(text: &str) -> Result<BraidWord> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, first) = lines.next().ok_or(Error::Syntax {
        line: 1,
        message: "missing strand count".into(),
    })?;
    let strands: i64 = first.parse().map_err(|_| Error::Syntax {
        line,
        message: format!("strand count {first:?} is not an integer"),
    })?;
    let rest: Vec<&str> = lines.map(|(_, l)| l).collect();
    parse_braid(&rest.join(" "), strands)
}

/// Slice file: first content line is the seam count, then one slice per line
/// (`X i +`, `X i -`, `U i`, `A i`), optionally an orientation line
/// `O + - …` with one flag per component.
pub fn parse_slice_file(text: &str) -> Result<SliceWord> {
    let mut seam: Option<usize> = None;
    let mut slices = Vec::new();
    let mut orientation = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: String| Error::Syntax { line, message };
        if seam.is_none() {
            let k = fields[0]
                .parse::<usize>()
                .map_err(|_| syntax(format!("seam count {:?} is not a nonnegative integer", fields[0])))?;
            if fields.len() != 1 {
                return Err(syntax("seam count line has extra fields".into()));
            }
            seam = Some(k);
            continue;
        }
        let position = |f: Option<&&str>| -> Result<usize> {
            let f = f.ok_or_else(|| syntax("missing position".into()))?;
            f.parse::<usize>()
                .map_err(|_| syntax(format!("position {f:?} is not a positive integer")))
        };
        match fields[0] {
            "X" | "x" => {
                if fields.len() != 3 {
                    return Err(syntax("crossing needs a position and a sign".into()));
                }
                let sign = match fields[2] {
                    "+" => Sign::Positive,
                    "-" => Sign::Negative,
                    s => return Err(syntax(format!("crossing sign {s:?} is not + or -"))),
                };
                slices.push(Slice::Cross {
                    position: position(fields.get(1))?,
                    sign,
                });
            }
            "U" | "u" | "A" | "a" => {
                if fields.len() != 2 {
                    return Err(syntax("cup/cap needs exactly one position".into()));
                }
                let p = position(fields.get(1))?;
                slices.push(if fields[0].eq_ignore_ascii_case("U") {
                    Slice::Cup { position: p }
                } else {
                    Slice::Cap { position: p }
                });
            }
            "O" | "o" => {
                let flags: Result<Vec<bool>> = fields[1..]
                    .iter()
                    .map(|f| match *f {
                        "+" => Ok(true),
                        "-" => Ok(false),
                        s => Err(syntax(format!("orientation flag {s:?} is not + or -"))),
                    })
                    .collect();
                orientation = Some(flags?);
            }
            other => return Err(syntax(format!("unknown slice kind {other:?}"))),
        }
    }
    let k = seam.ok_or(Error::Syntax {
        line: 1,
        message: "missing seam count".into(),
    })?;
    SliceWord::new(k, slices, orientation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_signs() {
        let w = parse_braid("1 -2", 3).unwrap();
        assert_eq!(w.strands(), 3);
        assert_eq!(
            w.letters(),
            &[BraidLetter::new(1, Sign::Positive), BraidLetter::new(2, Sign::Negative)]
        );
        assert_eq!((w.n_plus(), w.n_minus()), (1, 1));
    }

    #[test]
    fn parses_empty_word() {
        let w = parse_braid("", 1).unwrap();
        assert_eq!(w.len(), 0);
        assert_eq!(w.strands(), 1);
    }

    #[test]
    fn parses_trefoil() {
        let w = parse_braid("1 1 1", 2).unwrap();
        assert_eq!(w.tokens(), vec![1, 1, 1]);
    }

    #[test]
    fn rejects_bad_tokens() {
        assert!(matches!(parse_braid("0", 3), Err(Error::BadToken { .. })));
        assert!(matches!(parse_braid("3", 3), Err(Error::LetterOutOfRange { .. })));
        assert!(matches!(parse_braid("1 x", 3), Err(Error::BadToken { .. })));
        assert!(matches!(parse_braid("", 0), Err(Error::NoStrands(0))));
    }

    #[test]
    fn braid_file_with_comments() {
        let w = parse_braid_file("# unknot\n3\n1 -2 # two letters\n").unwrap();
        assert_eq!(w.tokens(), vec![1, -2]);
        assert!(parse_braid_file("# nothing\n").is_err());
    }

    #[test]
    fn slice_file_round_trip() {
        let text = "0\nU 1\nU 3\nX 2 +\nX 2 +\nA 1\nA 1\nO + -\n";
        let w = parse_slice_file(text).unwrap();
        assert_eq!(w.components(), 2);
        assert_eq!(w.orientations(), &[true, false]);
        assert_eq!(parse_slice_file(&w.to_slice_file()).unwrap(), w);
    }

    #[test]
    fn slice_file_errors_carry_line() {
        let err = parse_slice_file("2\nX 1 *\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = parse_slice_file("2\nQ 1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
    }
}
