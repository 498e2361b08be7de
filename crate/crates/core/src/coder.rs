//! Turning Middle English poetic lines into alliteration position strings,
//! plus the Oakden-style meter pattern parser and the annotated-line format.
//!
//! Auto-coding is a best-effort heuristic; hand-annotated input (asterisk
//! markup, [`parse_annotated_line`]) is the authoritative route.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::metric::SymbolSequence;

const DEFAULT_STOP_WORDS: &str = include_str!("../data/stopwords.txt");
const DEFAULT_PREFIXES: &str = include_str!("../data/prefixes.txt");

/// Punctuation stripped from word edges during tokenization.
const EDGE_PUNCTUATION: &[char] = &[',', '.', ';', ':', '!', '?'];

/// One word (or caesura) of a poetic line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// The word as it appeared, minus any annotation markup.
    pub surface: String,
    /// Lowercased, NFC-normalized, punctuation-stripped form ("" for a caesura).
    pub normalized: String,
    pub is_caesura: bool,
}

impl Token {
    fn caesura() -> Self {
        Token { surface: "/".to_string(), normalized: String::new(), is_caesura: true }
    }

    fn word(surface: &str) -> Self {
        Token {
            surface: surface.to_string(),
            normalized: normalize_word(surface),
            is_caesura: false,
        }
    }
}

/// Lowercases, NFC-normalizes, and strips edge punctuation from one word.
pub fn normalize_word(word: &str) -> String {
    word.nfc()
        .collect::<String>()
        .to_lowercase()
        .trim_matches(EDGE_PUNCTUATION)
        .to_string()
}

/// Splits a line on whitespace. A standalone "/" becomes a caesura token;
/// edge punctuation is stripped from words; chunks that normalize to
/// nothing (bare punctuation) are dropped.
pub fn tokenize(line: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in line.split_whitespace() {
        if chunk == "/" {
            tokens.push(Token::caesura());
            continue;
        }
        let token = Token::word(chunk);
        if !token.normalized.is_empty() {
            tokens.push(token);
        }
    }
    tokens
}

/// Initial-sound equivalence class of a word.
///
/// `Sh` is deliberately distinct from `S`; hard and soft c/g/ȝ split by the
/// following letter; consonant clusters classify by their first letter (all
/// initial letters are pronounced in Middle English, so kn → K). `Cluster`
/// covers onsets with no single-letter class of their own (ch, x, z).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SoundClass {
    Vowel,
    B,
    D,
    F,
    GHard,
    JSoftG,
    H,
    K,
    L,
    M,
    N,
    P,
    R,
    S,
    Sh,
    T,
    Th,
    V,
    W,
    Y,
    Cluster(String),
}

impl fmt::Display for SoundClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SoundClass::Vowel => write!(f, "VOWEL"),
            SoundClass::B => write!(f, "B"),
            SoundClass::D => write!(f, "D"),
            SoundClass::F => write!(f, "F"),
            SoundClass::GHard => write!(f, "G_HARD"),
            SoundClass::JSoftG => write!(f, "J_SOFT_G"),
            SoundClass::H => write!(f, "H"),
            SoundClass::K => write!(f, "K"),
            SoundClass::L => write!(f, "L"),
            SoundClass::M => write!(f, "M"),
            SoundClass::N => write!(f, "N"),
            SoundClass::P => write!(f, "P"),
            SoundClass::R => write!(f, "R"),
            SoundClass::S => write!(f, "S"),
            SoundClass::Sh => write!(f, "SH"),
            SoundClass::T => write!(f, "T"),
            SoundClass::Th => write!(f, "TH"),
            SoundClass::V => write!(f, "V"),
            SoundClass::W => write!(f, "W"),
            SoundClass::Y => write!(f, "Y"),
            SoundClass::Cluster(letters) => write!(f, "CLUSTER({letters})"),
        }
    }
}

fn is_vowel_letter(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y' | 'æ')
}

/// Front vowels trigger the soft readings of c, g, and ȝ.
fn is_front_vowel(c: Option<char>) -> bool {
    matches!(c, Some('e' | 'i' | 'y' | 'æ'))
}

/// Classifies a normalized, nonempty word by its initial sound.
///
/// Spelling conventions handled: u/v and i/j interchange by position
/// (initial consonantal v, vocalic u before consonants), sh/sch, th/þ/ð,
/// yogh with the hard/soft g rules, y as vowel before a consonant.
pub fn initial_sound_class(word: &str) -> Result<SoundClass> {
    let chars: Vec<char> = word.chars().collect();
    let first = *chars.first().ok_or_else(|| {
        Error::InvalidArgument("cannot classify an empty word".to_string())
    })?;
    let second = chars.get(1).copied();
    let next_is_vowel = second.map(is_vowel_letter).unwrap_or(false);

    let class = match first {
        'a' | 'e' | 'o' | 'æ' => SoundClass::Vowel,
        // initial i before a vowel is consonantal (ioye = joy)
        'i' => {
            if next_is_vowel {
                SoundClass::JSoftG
            } else {
                SoundClass::Vowel
            }
        }
        // initial u before a vowel is consonantal (uerray = verray)
        'u' => {
            if next_is_vowel {
                SoundClass::V
            } else {
                SoundClass::Vowel
            }
        }
        // y is a vowel before a consonant (ywroght), a consonant before one
        'y' => {
            if next_is_vowel {
                SoundClass::Y
            } else {
                SoundClass::Vowel
            }
        }
        // initial v before a consonant is a u spelling (vnder = under)
        'v' => {
            if next_is_vowel {
                SoundClass::V
            } else {
                SoundClass::Vowel
            }
        }
        'b' => SoundClass::B,
        'c' => match second {
            Some('h') => SoundClass::Cluster("ch".to_string()),
            s if is_front_vowel(s) => SoundClass::S,
            _ => SoundClass::K,
        },
        'd' => SoundClass::D,
        'f' => SoundClass::F,
        'g' => {
            if is_front_vowel(second) {
                SoundClass::JSoftG
            } else {
                SoundClass::GHard
            }
        }
        'ȝ' => {
            if is_front_vowel(second) {
                SoundClass::JSoftG
            } else {
                SoundClass::GHard
            }
        }
        'h' => SoundClass::H,
        'j' => SoundClass::JSoftG,
        'k' => SoundClass::K,
        'l' => SoundClass::L,
        'm' => SoundClass::M,
        'n' => SoundClass::N,
        'p' => SoundClass::P,
        'q' => SoundClass::K,
        'r' => SoundClass::R,
        's' => match second {
            Some('h') => SoundClass::Sh,
            Some('c') if chars.get(2).copied() == Some('h') => SoundClass::Sh,
            _ => SoundClass::S,
        },
        't' => {
            if second == Some('h') {
                SoundClass::Th
            } else {
                SoundClass::T
            }
        }
        'þ' | 'ð' => SoundClass::Th,
        'w' | 'ƿ' => SoundClass::W,
        'x' => SoundClass::Cluster("x".to_string()),
        'z' => SoundClass::Cluster("z".to_string()),
        other => {
            return Err(Error::UnclassifiableCharacter { ch: other, word: word.to_string() })
        }
    };
    Ok(class)
}

/// Stop-word and prefix lists used by the auto-coder. Both ship as
/// editable text files and can be replaced per run.
#[derive(Debug, Clone)]
pub struct Lexicon {
    stop_words: HashSet<String>,
    prefixes: Vec<String>,
}

fn parse_word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.nfc().collect::<String>().to_lowercase())
        .collect()
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon {
            stop_words: parse_word_list(DEFAULT_STOP_WORDS).into_iter().collect(),
            prefixes: parse_word_list(DEFAULT_PREFIXES),
        }
    }
}

impl Lexicon {
    /// Loads replacement lists; `None` keeps the built-in default for that list.
    pub fn from_files(stop_words: Option<&Path>, prefixes: Option<&Path>) -> Result<Self> {
        let mut lexicon = Lexicon::default();
        if let Some(path) = stop_words {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            lexicon.stop_words = parse_word_list(&text).into_iter().collect();
        }
        if let Some(path) = prefixes {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            lexicon.prefixes = parse_word_list(&text);
        }
        Ok(lexicon)
    }

    pub fn is_stop_word(&self, normalized: &str) -> bool {
        self.stop_words.contains(normalized)
    }

    pub fn prefixes(&self) -> &[String] {
        &self.prefixes
    }
}

/// Binary coding of a line: one bit per non-caesura token, 1 = alliterating.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositionString {
    bits: SymbolSequence,
}

impl PositionString {
    pub fn parse(text: &str) -> Result<Self> {
        let seq = SymbolSequence::new(text.trim());
        if seq.is_empty() {
            return Err(Error::InvalidPositionString {
                text: text.to_string(),
                reason: "empty".to_string(),
            });
        }
        if let Some(bad) = seq.symbols().iter().find(|c| !matches!(c, '0' | '1')) {
            return Err(Error::InvalidPositionString {
                text: text.to_string(),
                reason: format!("symbol '{bad}' is not 0 or 1"),
            });
        }
        Ok(PositionString { bits: seq })
    }

    pub fn from_marks(marks: &[bool]) -> Self {
        let text: String = marks.iter().map(|&m| if m { '1' } else { '0' }).collect();
        PositionString { bits: SymbolSequence::new(&text) }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_sequence(&self) -> &SymbolSequence {
        &self.bits
    }
}

impl fmt::Display for PositionString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

/// An Oakden-style meter pattern over {a, b, x} with exactly one caesura "/".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeterPattern {
    text: SymbolSequence,
}

impl MeterPattern {
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let seq = SymbolSequence::new(trimmed);
        let invalid = |reason: String| Error::InvalidMeterPattern {
            text: trimmed.to_string(),
            reason,
        };
        if let Some(bad) = seq.symbols().iter().find(|c| !matches!(c, 'a' | 'b' | 'x' | '/')) {
            return Err(invalid(format!("symbol '{bad}' is not one of a, b, x, /")));
        }
        let slashes = seq.symbols().iter().filter(|&&c| c == '/').count();
        if slashes != 1 {
            return Err(invalid(format!("expected exactly one '/', found {slashes}")));
        }
        let pos = seq.symbols().iter().position(|&c| c == '/').unwrap();
        if pos == 0 || pos == seq.len() - 1 {
            return Err(invalid("a half-line is empty".to_string()));
        }
        Ok(MeterPattern { text: seq })
    }

    pub fn as_sequence(&self) -> &SymbolSequence {
        &self.text
    }
}

impl fmt::Display for MeterPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

/// Which coding to produce.
///
/// A marks every word whose initial sound matches the line's alliterating
/// class. B restricts to stressed alliteration: stop-listed function words
/// are never marked, words gain marks through unstressed prefixes, and each
/// half-line keeps at most its final two candidates (earlier ones are
/// treated as anacrusis).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            other => Err(Error::InvalidArgument(format!(
                "variant must be A or B, got \"{other}\""
            ))),
        }
    }
}

/// Maximum alliterating lifts per half-line; surplus candidates at the
/// start of a verse are read as anacrusis and unmarked in variant B.
const LIFTS_PER_VERSE: usize = 2;

struct ClassifiedLine<'a> {
    words: Vec<&'a Token>,
    classes: Vec<SoundClass>,
    /// Count of caesuras preceding each word (0 = a-verse).
    verse: Vec<usize>,
}

fn classify_line<'a>(tokens: &'a [Token]) -> Result<ClassifiedLine<'a>> {
    let mut words = Vec::new();
    let mut verse = Vec::new();
    let mut caesuras = 0;
    for token in tokens {
        if token.is_caesura {
            caesuras += 1;
        } else {
            words.push(token);
            verse.push(caesuras);
        }
    }
    if words.is_empty() {
        return Err(Error::EmptyLine);
    }
    let classes = words
        .iter()
        .map(|t| initial_sound_class(&t.normalized))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassifiedLine { words, classes, verse })
}

fn pick_class(line: &ClassifiedLine<'_>, lexicon: &Lexicon) -> SoundClass {
    // Count content words only; a line of nothing but function words falls
    // back to counting everything.
    let content: Vec<usize> = (0..line.words.len())
        .filter(|&i| !lexicon.is_stop_word(&line.words[i].normalized))
        .collect();
    let counted: Vec<usize> =
        if content.is_empty() { (0..line.words.len()).collect() } else { content };

    let mut counts: HashMap<&SoundClass, usize> = HashMap::new();
    let mut first_seen: HashMap<&SoundClass, usize> = HashMap::new();
    for &i in &counted {
        let class = &line.classes[i];
        *counts.entry(class).or_insert(0) += 1;
        first_seen.entry(class).or_insert(i);
    }
    let best = counts
        .iter()
        .map(|(&class, &count)| (count, usize::MAX - first_seen[class], class))
        .max_by_key(|&(count, inv_first, _)| (count, inv_first))
        .map(|(_, _, class)| class)
        .expect("line has at least one word");
    best.clone()
}

/// The sound class the line alliterates on: the class with the highest
/// count over content words, earliest first occurrence breaking ties.
pub fn alliterating_class(tokens: &[Token], lexicon: &Lexicon) -> Result<SoundClass> {
    let line = classify_line(tokens)?;
    Ok(pick_class(&line, lexicon))
}

fn matches_via_prefix(word: &str, target: &SoundClass, lexicon: &Lexicon) -> bool {
    for prefix in lexicon.prefixes() {
        if let Some(stem) = word.strip_prefix(prefix.as_str()) {
            if stem.chars().count() < 2 {
                continue;
            }
            if let Ok(class) = initial_sound_class(stem) {
                if class == *target {
                    return true;
                }
            }
        }
    }
    false
}

/// Codes one tokenized line as a position string. Best-effort: the
/// annotated-input path is authoritative where hand markings exist.
pub fn auto_code_line(
    tokens: &[Token],
    variant: Variant,
    lexicon: &Lexicon,
) -> Result<PositionString> {
    let line = classify_line(tokens)?;
    let target = pick_class(&line, lexicon);

    let mut marks: Vec<bool> = match variant {
        Variant::A => line.classes.iter().map(|c| *c == target).collect(),
        Variant::B => (0..line.words.len())
            .map(|i| {
                let word = &line.words[i].normalized;
                if lexicon.is_stop_word(word) {
                    return false;
                }
                line.classes[i] == target || matches_via_prefix(word, &target, lexicon)
            })
            .collect(),
    };

    if variant == Variant::B {
        let verse_count = line.verse.last().copied().unwrap_or(0) + 1;
        for v in 0..verse_count {
            let candidates: Vec<usize> = (0..marks.len())
                .filter(|&i| marks[i] && line.verse[i] == v)
                .collect();
            for &i in candidates.iter().rev().skip(LIFTS_PER_VERSE) {
                marks[i] = false;
            }
        }
    }

    Ok(PositionString::from_marks(&marks))
}

/// A line with hand marks aligned to its non-caesura tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedLine {
    pub tokens: Vec<Token>,
    pub marks: Vec<bool>,
}

impl AnnotatedLine {
    pub fn position_string(&self) -> PositionString {
        PositionString::from_marks(&self.marks)
    }

    /// Canonical asterisk form: marked words wrapped in asterisks, tokens
    /// joined by single spaces. `parse_annotated_line` inverts this.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        let mut mark_iter = self.marks.iter();
        for token in &self.tokens {
            if token.is_caesura {
                parts.push("/".to_string());
            } else if *mark_iter.next().expect("marks align with word tokens") {
                parts.push(format!("*{}*", token.surface));
            } else {
                parts.push(token.surface.clone());
            }
        }
        parts.join(" ")
    }
}

/// Parses a line in the annotation format: alliterating words wrapped in
/// asterisks, e.g. `In a *somer* *seson* / whan *softe* was the *sonne*`.
pub fn parse_annotated_line(text: &str) -> Result<AnnotatedLine> {
    let mut tokens = Vec::new();
    let mut marks = Vec::new();

    // Track 1-based character columns for error reporting.
    let mut chunks: Vec<(usize, String)> = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (idx, c) in text.chars().enumerate() {
        let column = idx + 1;
        if c.is_whitespace() {
            if let Some(chunk) = current.take() {
                chunks.push(chunk);
            }
        } else {
            current.get_or_insert_with(|| (column, String::new())).1.push(c);
        }
    }
    if let Some(chunk) = current.take() {
        chunks.push(chunk);
    }

    for (start, chunk) in chunks {
        if chunk == "/" {
            tokens.push(Token::caesura());
            continue;
        }
        let trimmed = chunk.trim_matches(EDGE_PUNCTUATION);
        if trimmed.is_empty() {
            continue;
        }
        let stars = trimmed.chars().filter(|&c| c == '*').count();
        let surface = if stars == 0 {
            trimmed.to_string()
        } else if stars == 2 && trimmed.starts_with('*') && trimmed.ends_with('*') && trimmed.len() > 2
        {
            trimmed[1..trimmed.len() - 1].to_string()
        } else {
            let offset = chunk.chars().position(|c| c == '*').unwrap_or(0);
            return Err(Error::Annotation {
                column: start + offset,
                message: format!("unbalanced asterisks in \"{chunk}\""),
            });
        };
        let token = Token::word(&surface);
        if token.normalized.is_empty() {
            return Err(Error::Annotation {
                column: start,
                message: format!("\"{chunk}\" marks no word"),
            });
        }
        tokens.push(token);
        marks.push(stars == 2);
    }

    if tokens.iter().all(|t| t.is_caesura) {
        return Err(Error::EmptyLine);
    }
    Ok(AnnotatedLine { tokens, marks })
}
