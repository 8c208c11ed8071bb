//! Corpus ingestion: tokenization, function-word removal, the content-word
//! lexicon, and sentence-to-pattern encoding.
//!
//! A sentence becomes a length-N binary pattern with bit i set iff lexicon
//! word i occurs in the sentence. Multiple occurrences of a word within one
//! sentence collapse to a single set bit.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Default English function-word list bundled with the crate, one word per
/// line ('#' lines are comments).
pub const DEFAULT_STOPLIST: &str = include_str!("../data/stoplist_en.txt");

// ---------------------------------------------------------------------------
// Tokenization
// ---------------------------------------------------------------------------

/// Sentence segmentation settings.
#[derive(Debug, Clone)]
pub struct TokenizerConfig {
    /// Characters that end a sentence when followed by whitespace or
    /// end-of-input.
    pub terminators: Vec<char>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            terminators: vec!['.', '!', '?'],
        }
    }
}

/// Validate raw bytes as UTF-8, reporting the offset of the first bad byte.
pub fn decode_utf8(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::Decode {
        offset: e.valid_up_to(),
    })
}

/// Read a text file, validating UTF-8 with a byte offset on failure.
pub fn load_text(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_utf8(&bytes).map(str::to_owned)
}

/// Lowercase a raw token and strip leading/trailing non-alphanumeric
/// characters. Returns `None` when nothing is left.
fn normalize_token(raw: &str) -> Option<String> {
    let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        None
    } else {
        Some(trimmed.to_lowercase())
    }
}

fn tokenize_one_sentence(text: &str) -> Vec<String> {
    text.split_whitespace().filter_map(normalize_token).collect()
}

/// Split raw text into sentences and tokenize each.
///
/// A sentence ends at a terminator character followed by whitespace or
/// end-of-input; trailing unterminated text forms one final sentence. Words
/// are lowercased with leading/trailing punctuation stripped; sentences left
/// with no words are dropped.
pub fn tokenize_sentences(raw_text: &str, config: &TokenizerConfig) -> Vec<Vec<String>> {
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut chars = raw_text.char_indices().peekable();

    while let Some((idx, ch)) = chars.next() {
        if config.terminators.contains(&ch) {
            let at_boundary = match chars.peek() {
                Some(&(_, next)) => next.is_whitespace(),
                None => true,
            };
            if at_boundary {
                let end = idx + ch.len_utf8();
                let words = tokenize_one_sentence(&raw_text[start..end]);
                if !words.is_empty() {
                    sentences.push(words);
                }
                start = end;
            }
        }
    }
    let words = tokenize_one_sentence(&raw_text[start..]);
    if !words.is_empty() {
        sentences.push(words);
    }
    sentences
}

/// Tokenize pre-segmented text: one sentence per line.
pub fn tokenize_lines(raw_text: &str) -> Vec<Vec<String>> {
    raw_text
        .lines()
        .map(tokenize_one_sentence)
        .filter(|s| !s.is_empty())
        .collect()
}

// ---------------------------------------------------------------------------
// Function words
// ---------------------------------------------------------------------------

/// A set of function words to strip before encoding.
#[derive(Debug, Clone, Default)]
pub struct Stoplist {
    words: HashSet<String>,
}

impl Stoplist {
    /// Parse stoplist text: one word per line, '#' comment lines and blank
    /// lines ignored. Entries are lowercased.
    pub fn from_text(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Stoplist { words }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::from_text(&load_text(path)?))
    }

    /// The bundled English function-word list.
    pub fn default_english() -> Self {
        Self::from_text(DEFAULT_STOPLIST)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Drop stoplist members from a sentence, preserving the order (and
/// duplicates) of the remaining content words.
pub fn remove_function_words(sentence: &[String], stoplist: &Stoplist) -> Vec<String> {
    sentence
        .iter()
        .filter(|w| !stoplist.contains(w))
        .cloned()
        .collect()
}

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

/// Bidirectional word <-> unit-index mapping over the distinct content words
/// of a corpus, in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Lexicon {
    /// Build from filtered sentences; indices follow first occurrence.
    pub fn build(sentences: &[Vec<String>]) -> Result<Self> {
        let mut words = Vec::new();
        let mut index = HashMap::new();
        for sentence in sentences {
            for word in sentence {
                if !index.contains_key(word.as_str()) {
                    index.insert(word.clone(), words.len());
                    words.push(word.clone());
                }
            }
        }
        if words.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        Ok(Lexicon { words, index })
    }

    /// Build from an explicit word list (must be distinct and non-empty).
    pub fn from_words(words: Vec<String>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::InvalidConfigValue {
                    key: "lexicon".into(),
                    message: format!("duplicate word {w:?}"),
                });
            }
        }
        Ok(Lexicon { words, index })
    }

    /// A placeholder lexicon `w0..w{n-1}` for synthetic pattern sets.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::from_words((0..n).map(|i| format!("w{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> Option<&str> {
        self.words.get(i).map(String::as_str)
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Serialize: line k holds the word with index k.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            out.push_str(w);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_words(text.lines().map(str::to_owned).collect())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&load_text(path)?)
    }
}

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

/// A length-N binary vector; bit i marks the presence of lexicon word i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    bits: Vec<bool>,
}

impl Pattern {
    pub fn zeros(n: usize) -> Self {
        Pattern {
            bits: vec![false; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Pattern { bits }
    }

    /// Build from set-bit indices; every index must be `< n`.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, size: n });
            }
            bits[i] = true;
        }
        Ok(Pattern { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// How `encode` treats words missing from the lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownWordPolicy {
    /// Ignore unknown words (recall probes may contain them).
    #[default]
    Skip,
    /// Fail on the first unknown word.
    Error,
}

/// Encode a content-word sentence as a binary pattern over `lexicon`.
pub fn encode(
    sentence: &[String],
    lexicon: &Lexicon,
    policy: UnknownWordPolicy,
) -> Result<Pattern> {
    let mut pattern = Pattern::zeros(lexicon.len());
    for word in sentence {
        match lexicon.index_of(word) {
            Some(i) => pattern.set(i, true),
            None => match policy {
                UnknownWordPolicy::Skip => {}
                UnknownWordPolicy::Error => return Err(Error::UnknownWord(word.clone())),
            },
        }
    }
    Ok(pattern)
}

/// Words for the set bits of a pattern, in index order.
pub fn decode(pattern: &Pattern, lexicon: &Lexicon) -> Vec<&str> {
    pattern
        .ones()
        .filter_map(|i| lexicon.word(i))
        .collect()
}

/// A set of same-length patterns together with the lexicon they index.
#[derive(Debug, Clone)]
pub struct PatternSet {
    pub lexicon: Lexicon,
    pub patterns: Vec<Pattern>,
}

impl PatternSet {
    pub fn new(lexicon: Lexicon, patterns: Vec<Pattern>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::EmptyPatternSet);
        }
        let n = lexicon.len();
        for p in &patterns {
            if p.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: p.len(),
                });
            }
        }
        Ok(PatternSet { lexicon, patterns })
    }

    /// Tokenize, filter and encode raw text in one step. Sentences left empty
    /// after function-word removal are dropped.
    pub fn from_text(
        raw_text: &str,
        config: &TokenizerConfig,
        stoplist: &Stoplist,
    ) -> Result<Self> {
        let sentences: Vec<Vec<String>> = tokenize_sentences(raw_text, config)
            .iter()
            .map(|s| remove_function_words(s, stoplist))
            .filter(|s| !s.is_empty())
            .collect();
        let lexicon = Lexicon::build(&sentences)?;
        let patterns = sentences
            .iter()
            .map(|s| encode(s, &lexicon, UnknownWordPolicy::Error))
            .collect::<Result<Vec<_>>>()?;
        PatternSet::new(lexicon, patterns)
    }

    /// Number of units N.
    pub fn n_units(&self) -> usize {
        self.lexicon.len()
    }

    /// Number of stored patterns n.
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// Serialize patterns sparsely: header `N n`, then one line per pattern
/// listing the sorted indices of its set bits.
pub fn patterns_to_text(patterns: &[Pattern], n_units: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", n_units, patterns.len());
    for p in patterns {
        let indices: Vec<String> = p.ones().map(|i| i.to_string()).collect();
        out.push_str(&indices.join(" "));
        out.push('\n');
    }
    out
}

/// Parse the sparse pattern format. Returns `(n_units, patterns)`.
pub fn patterns_from_text(text: &str, origin: &Path) -> Result<(usize, Vec<Pattern>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(origin, 1, "missing 'N n' header"))?;
    let mut parts = header.split_whitespace();
    let n_units: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(origin, 1, "bad unit count in header"))?;
    let n_patterns: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(origin, 1, "bad pattern count in header"))?;

    let mut patterns = Vec::with_capacity(n_patterns);
    for _ in 0..n_patterns {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| Error::parse(origin, patterns.len() + 2, "missing pattern line"))?;
        let mut indices = Vec::new();
        for tok in line.split_whitespace() {
            let i: usize = tok
                .parse()
                .map_err(|_| Error::parse(origin, lineno + 1, format!("bad index {tok:?}")))?;
            indices.push(i);
        }
        patterns.push(Pattern::from_indices(n_units, &indices)?);
    }
    Ok((n_units, patterns))
}

pub fn save_patterns(patterns: &[Pattern], n_units: usize, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, patterns_to_text(patterns, n_units)).map_err(|e| Error::io(path, e))
}

pub fn load_patterns(path: impl AsRef<Path>) -> Result<(usize, Vec<Pattern>)> {
    let path = path.as_ref();
    patterns_from_text(&load_text(path)?, path)
}

// ---------------------------------------------------------------------------
// Corpus statistics
// ---------------------------------------------------------------------------

/// Summary statistics over a filtered corpus, including the lexicon growth
/// curve sampled as sentences accumulate.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub sentence_count: usize,
    pub lexicon_size: usize,
    /// Content words per sentence.
    pub mean_content_length: f64,
    /// `(sentences_seen, lexicon_size)` samples, nondecreasing in both
    /// coordinates; the final sentence count is always sampled.
    pub growth_curve: Vec<(usize, usize)>,
}

/// Scan filtered sentences, sampling the lexicon size every `sample_stride`
/// sentences.
pub fn corpus_stats(sentences: &[Vec<String>], sample_stride: usize) -> CorpusStats {
    let stride = sample_stride.max(1);
    let mut seen: HashSet<&str> = HashSet::new();
    let mut growth_curve = Vec::new();
    let mut total_tokens = 0usize;

    for (k, sentence) in sentences.iter().enumerate() {
        total_tokens += sentence.len();
        for word in sentence {
            seen.insert(word.as_str());
        }
        let count = k + 1;
        if count % stride == 0 || count == sentences.len() {
            growth_curve.push((count, seen.len()));
        }
    }

    let sentence_count = sentences.len();
    CorpusStats {
        sentence_count,
        lexicon_size: seen.len(),
        mean_content_length: if sentence_count == 0 {
            0.0
        } else {
            total_tokens as f64 / sentence_count as f64
        },
        growth_curve,
    }
}

/// Least-squares fit of `F(n) = a * n^b` to a growth curve in log-log space.
/// Returns `(a, b)`, or `None` with fewer than two usable points.
pub fn fit_growth_exponent(curve: &[(usize, usize)]) -> Option<(f64, f64)> {
    let points: Vec<(f64, f64)> = curve
        .iter()
        .filter(|&&(n, f)| n > 0 && f > 0)
        .map(|&(n, f)| ((n as f64).ln(), (f as f64).ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let b = (m * sxy - sx * sy) / denom;
    let ln_a = (sy - b * sx) / m;
    Some((ln_a.exp(), b))
}
