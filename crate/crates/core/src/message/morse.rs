//! International Morse code as a symbol sequence.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorseSymbol {
    Dot,
    Dash,
    LetterGap,
    WordGap,
}

impl MorseSymbol {
    pub fn is_gap(self) -> bool {
        matches!(self, MorseSymbol::LetterGap | MorseSymbol::WordGap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("character {0:?} has no International Morse code")]
    UnsupportedCharacter(char),
    #[error("symbol group {0:?} maps to no character")]
    UnknownSymbolGroup(String),
    #[error("gap symbol at position {0} is leading, trailing or repeated")]
    MisplacedGap(usize),
}

/// Dots and dashes with letter and word separators.
///
/// Never starts or ends with a gap and never holds two gaps in a row. The
/// empty sequence is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<MorseSymbol>", into = "Vec<MorseSymbol>")]
pub struct MorseSequence(Vec<MorseSymbol>);

impl MorseSequence {
    pub fn new(symbols: Vec<MorseSymbol>) -> Result<Self, MorseError> {
        for (i, s) in symbols.iter().enumerate() {
            if !s.is_gap() {
                continue;
            }
            let misplaced = i == 0 || i + 1 == symbols.len() || symbols[i - 1].is_gap();
            if misplaced {
                return Err(MorseError::MisplacedGap(i));
            }
        }
        Ok(MorseSequence(symbols))
    }

    pub fn symbols(&self) -> &[MorseSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of dots and dashes.
    pub fn mark_count(&self) -> usize {
        self.0.iter().filter(|s| !s.is_gap()).count()
    }

    /// Parses the `.-` notation used by [`fmt::Display`]: one space between
    /// letters, ` / ` between words.
    pub fn parse_notation(s: &str) -> Result<Self, MorseError> {
        let mut symbols = Vec::new();
        for (w, word) in s.split('/').map(str::trim).enumerate() {
            if w > 0 {
                symbols.push(MorseSymbol::WordGap);
            }
            for (l, letter) in word.split_whitespace().enumerate() {
                if l > 0 {
                    symbols.push(MorseSymbol::LetterGap);
                }
                for c in letter.chars() {
                    symbols.push(match c {
                        '.' => MorseSymbol::Dot,
                        '-' => MorseSymbol::Dash,
                        other => return Err(MorseError::UnsupportedCharacter(other)),
                    });
                }
            }
        }
        MorseSequence::new(symbols)
    }
}

impl TryFrom<Vec<MorseSymbol>> for MorseSequence {
    type Error = MorseError;

    fn try_from(symbols: Vec<MorseSymbol>) -> Result<Self, Self::Error> {
        MorseSequence::new(symbols)
    }
}

impl From<MorseSequence> for Vec<MorseSymbol> {
    fn from(seq: MorseSequence) -> Self {
        seq.0
    }
}

impl fmt::Display for MorseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                MorseSymbol::Dot => ".",
                MorseSymbol::Dash => "-",
                MorseSymbol::LetterGap => " ",
                MorseSymbol::WordGap => " / ",
            })?;
        }
        Ok(())
    }
}

const TABLE: &[(char, &str)] = &[
    ('A', ".-"),
    ('B', "-..."),
    ('C', "-.-."),
    ('D', "-.."),
    ('E', "."),
    ('F', "..-."),
    ('G', "--."),
    ('H', "...."),
    ('I', ".."),
    ('J', ".---"),
    ('K', "-.-"),
    ('L', ".-.."),
    ('M', "--"),
    ('N', "-."),
    ('O', "---"),
    ('P', ".--."),
    ('Q', "--.-"),
    ('R', ".-."),
    ('S', "..."),
    ('T', "-"),
    ('U', "..-"),
    ('V', "...-"),
    ('W', ".--"),
    ('X', "-..-"),
    ('Y', "-.--"),
    ('Z', "--.."),
    ('0', "-----"),
    ('1', ".----"),
    ('2', "..---"),
    ('3', "...--"),
    ('4', "....-"),
    ('5', "....."),
    ('6', "-...."),
    ('7', "--..."),
    ('8', "---.."),
    ('9', "----."),
    ('.', ".-.-.-"),
    (',', "--..--"),
    ('?', "..--.."),
    ('\'', ".----."),
    ('/', "-..-."),
    ('(', "-.--."),
    (')', "-.--.-"),
    (':', "---..."),
    ('=', "-...-"),
    ('+', ".-.-."),
    ('-', "-....-"),
    ('"', ".-..-."),
    ('@', ".--.-."),
];

/// Characters accepted by [`text_to_morse`], besides space.
pub fn alphabet() -> impl Iterator<Item = char> {
    TABLE.iter().map(|&(c, _)| c)
}

fn code_for(c: char) -> Option<&'static str> {
    let upper = c.to_ascii_uppercase();
    TABLE.iter().find(|&&(k, _)| k == upper).map(|&(_, code)| code)
}

fn char_for(code: &str) -> Option<char> {
    TABLE.iter().find(|&&(_, v)| v == code).map(|&(c, _)| c)
}

/// Encodes text. Runs of spaces collapse to one word gap and leading or
/// trailing spaces are dropped.
pub fn text_to_morse(text: &str) -> Result<MorseSequence, MorseError> {
    let mut symbols = Vec::new();
    for (w, word) in text.split(' ').filter(|w| !w.is_empty()).enumerate() {
        if w > 0 {
            symbols.push(MorseSymbol::WordGap);
        }
        for (l, c) in word.chars().enumerate() {
            let code = code_for(c).ok_or(MorseError::UnsupportedCharacter(c))?;
            if l > 0 {
                symbols.push(MorseSymbol::LetterGap);
            }
            symbols.extend(code.chars().map(|m| if m == '.' { MorseSymbol::Dot } else { MorseSymbol::Dash }));
        }
    }
    MorseSequence::new(symbols)
}

pub fn morse_to_text(seq: &MorseSequence) -> Result<String, MorseError> {
    let mut out = String::new();
    let mut group = String::new();
    let flush = |group: &mut String, out: &mut String| -> Result<(), MorseError> {
        if !group.is_empty() {
            out.push(char_for(group).ok_or_else(|| MorseError::UnknownSymbolGroup(group.clone()))?);
            group.clear();
        }
        Ok(())
    };
    for s in seq.symbols() {
        match s {
            MorseSymbol::Dot => group.push('.'),
            MorseSymbol::Dash => group.push('-'),
            MorseSymbol::LetterGap => flush(&mut group, &mut out)?,
            MorseSymbol::WordGap => {
                flush(&mut group, &mut out)?;
                out.push(' ');
            }
        }
    }
    flush(&mut group, &mut out)?;
    Ok(out)
}

/// Collapses whitespace runs and uppercases, i.e. the text that
/// `morse_to_text(text_to_morse(t))` reproduces.
pub fn normalize_text(text: &str) -> String {
    text.split(' ').filter(|w| !w.is_empty()).collect::<Vec<_>>().join(" ").to_ascii_uppercase()
}

#[cfg(test)]
mod tests {
    use super::MorseSymbol::*;
    use super::*;

    #[test]
    fn sos() {
        let seq = text_to_morse("SOS").unwrap();
        assert_eq!(seq.symbols(), &[Dot, Dot, Dot, LetterGap, Dash, Dash, Dash, LetterGap, Dot, Dot, Dot]);
        assert_eq!(seq.to_string(), "... --- ...");
        assert_eq!(morse_to_text(&seq).unwrap(), "SOS");
    }

    #[test]
    fn shortest_letter_and_case() {
        assert_eq!(text_to_morse("E").unwrap().symbols(), &[Dot]);
        assert_eq!(text_to_morse("sos").unwrap(), text_to_morse("SOS").unwrap());
    }

    #[test]
    fn unsupported() {
        assert_eq!(text_to_morse("\u{e9}"), Err(MorseError::UnsupportedCharacter('\u{e9}')));
        assert_eq!(text_to_morse("a!"), Err(MorseError::UnsupportedCharacter('!')));
    }

    #[test]
    fn words_and_spaces() {
        let seq = text_to_morse("  SOS   HELP ").unwrap();
        assert_eq!(seq.symbols().iter().filter(|s| **s == WordGap).count(), 1);
        assert_eq!(morse_to_text(&seq).unwrap(), "SOS HELP");
        assert!(text_to_morse("   ").unwrap().is_empty());
    }

    #[test]
    fn invalid_gap_placement() {
        assert_eq!(MorseSequence::new(vec![LetterGap, Dot]), Err(MorseError::MisplacedGap(0)));
        assert_eq!(MorseSequence::new(vec![Dot, WordGap]), Err(MorseError::MisplacedGap(1)));
        assert_eq!(MorseSequence::new(vec![Dot, LetterGap, WordGap, Dot]), Err(MorseError::MisplacedGap(2)));
    }

    #[test]
    fn unknown_group() {
        let seq = MorseSequence::new(vec![Dot, Dot, Dot, Dot, Dot, Dot, Dot]).unwrap();
        assert_eq!(morse_to_text(&seq), Err(MorseError::UnknownSymbolGroup(".......".into())));
    }

    #[test]
    fn notation_round_trip() {
        let seq = text_to_morse("SOS NOW").unwrap();
        assert_eq!(MorseSequence::parse_notation(&seq.to_string()).unwrap(), seq);
    }

    #[test]
    fn serde_validates() {
        let ok: MorseSequence = serde_json::from_str(r#"["dot","letter_gap","dash"]"#).unwrap();
        assert_eq!(ok.len(), 3);
        assert!(serde_json::from_str::<MorseSequence>(r#"["letter_gap"]"#).is_err());
    }
}
