//! Element corpora for experiments.

use std::collections::HashSet;
use std::path::PathBuf;

use rand::distr::Alphanumeric;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SimError;

const SYNTHETIC_LEN: usize = 16;

/// Where trial elements come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementSource {
    /// Random 16-character alphanumeric strings, effectively unbounded.
    Synthetic,
    /// Newline-delimited UTF-8 file; lines are trimmed, empty lines and
    /// duplicates are dropped.
    Wordlist(PathBuf),
}

pub(crate) enum ElementPool {
    Synthetic,
    Words(Vec<String>),
}

impl ElementPool {
    pub fn load(source: &ElementSource) -> Result<Self, SimError> {
        match source {
            ElementSource::Synthetic => Ok(ElementPool::Synthetic),
            ElementSource::Wordlist(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|source| SimError::WordlistRead {
                        path: path.clone(),
                        source,
                    })?;
                let mut seen: HashSet<&str> = HashSet::new();
                let words = text
                    .lines()
                    .map(str::trim)
                    .filter(|w| !w.is_empty() && seen.insert(w))
                    .map(String::from)
                    .collect();
                Ok(ElementPool::Words(words))
            }
        }
    }

    /// Distinct elements on offer; `None` means unbounded.
    pub fn available(&self) -> Option<usize> {
        match self {
            ElementPool::Synthetic => None,
            ElementPool::Words(words) => Some(words.len()),
        }
    }

    /// Draws `count` distinct elements; content and order depend only on
    /// the rng state.
    pub fn sample<R: Rng>(&self, count: usize, rng: &mut R) -> Result<Vec<String>, SimError> {
        match self {
            ElementPool::Synthetic => {
                let mut seen = HashSet::with_capacity(count);
                let mut out = Vec::with_capacity(count);
                while out.len() < count {
                    let word: String = (0..SYNTHETIC_LEN)
                        .map(|_| rng.sample(Alphanumeric) as char)
                        .collect();
                    if seen.insert(word.clone()) {
                        out.push(word);
                    }
                }
                Ok(out)
            }
            ElementPool::Words(words) => {
                if words.len() < count {
                    return Err(SimError::PoolExhausted {
                        available: words.len(),
                        needed: count,
                    });
                }
                Ok(rand::seq::index::sample(rng, words.len(), count)
                    .iter()
                    .map(|i| words[i].clone())
                    .collect())
            }
        }
    }
}

/// Draws `count` distinct elements from `source` under a fixed seed.
pub fn generate_elements(
    source: &ElementSource,
    count: usize,
    seed: u64,
) -> Result<Vec<String>, SimError> {
    ElementPool::load(source)?.sample(count, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn synthetic_elements_are_distinct_and_reproducible() {
        let a = generate_elements(&ElementSource::Synthetic, 500, 1).unwrap();
        let b = generate_elements(&ElementSource::Synthetic, 500, 1).unwrap();
        let c = generate_elements(&ElementSource::Synthetic, 500, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.iter().collect::<HashSet<_>>().len(), 500);
        assert!(a.iter().all(|w| w.len() == 16));
        assert!(a
            .iter()
            .all(|w| w.bytes().all(|b| b.is_ascii_alphanumeric())));
    }

    #[test]
    fn wordlist_loads_trimmed_distinct_lines() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, "apple\n banana \n\napple\ncherry\n").unwrap();
        let source = ElementSource::Wordlist(file.path().to_path_buf());
        let pool = ElementPool::load(&source).unwrap();
        assert_eq!(pool.available(), Some(3));
        let sample = generate_elements(&source, 3, 9).unwrap();
        let mut sorted = sample.clone();
        sorted.sort();
        assert_eq!(sorted, ["apple", "banana", "cherry"]);
        assert_eq!(generate_elements(&source, 3, 9).unwrap(), sample);
    }

    #[test]
    fn wordlist_errors() {
        let missing = ElementSource::Wordlist(PathBuf::from("/nonexistent/words.txt"));
        assert!(matches!(
            generate_elements(&missing, 1, 0),
            Err(SimError::WordlistRead { .. })
        ));
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, "a\nb\nc\n").unwrap();
        let source = ElementSource::Wordlist(file.path().to_path_buf());
        assert!(matches!(
            generate_elements(&source, 4, 0),
            Err(SimError::PoolExhausted { available: 3, needed: 4 })
        ));
    }
}
