//! tf-idf weighting and cosine ranking over documents whose terms are encoded
//! assignments.
//!
//! Term frequency counts occurrences in one document; document frequency
//! counts documents of the corpus containing the term at least once. The
//! query never contributes to document frequencies.

use std::collections::{BTreeMap, BTreeSet};

use crate::assignment::{decode, Term, TermKind};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::partition::Partition;

/// An ordered list of decoded terms; duplicates are significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document(Vec<Term>);

impl Document {
    pub fn new(terms: Vec<Term>) -> Self {
        Document(terms)
    }

    /// Whitespace-separated terms, each of which must decode under `shape`
    /// and be of `kind`.
    pub fn parse(line: &str, kind: TermKind, shape: &Partition) -> Result<Self> {
        let terms = line
            .split_whitespace()
            .map(|tok| {
                let t = decode(tok, shape)?;
                if t.kind() != kind {
                    return Err(Error::parse(format!(
                        "{tok:?} is not a {} term",
                        kind.name()
                    )));
                }
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        if terms.is_empty() {
            return Err(Error::parse("empty document"));
        }
        Ok(Document(terms))
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn term_frequencies(&self) -> BTreeMap<&Term, usize> {
        let mut tf = BTreeMap::new();
        for t in &self.0 {
            *tf.entry(t).or_insert(0) += 1;
        }
        tf
    }
}

/// Documents sharing one encoding (shape and term kind).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub shape: Partition,
    pub kind: TermKind,
    pub documents: Vec<Document>,
}

/// A single query document with its encoding metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub shape: Partition,
    pub kind: TermKind,
    pub document: Document,
}

/// Parses a corpus file:
///
/// ```text
/// #shape 2,2
/// #kind tabloid
/// # any other line starting with '#' is a comment
/// Y1,3,2,4 Y1,2,3,4
/// ```
///
/// Both headers must precede the first document; every other non-blank line
/// is one document.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    let mut shape: Option<Partition> = None;
    let mut kind: Option<TermKind> = None;
    let mut documents = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |why: String| Error::parse(format!("line {}: {why}", i + 1));
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let value = value.trim();
            let header = match key {
                "shape" => {
                    let s: Partition = value.parse().map_err(|e: Error| err(e.to_string()))?;
                    shape.replace(s).is_some()
                }
                "kind" => {
                    let k: TermKind = value.parse().map_err(|e: Error| err(e.to_string()))?;
                    kind.replace(k).is_some()
                }
                _ => continue,
            };
            if header {
                return Err(err(format!("duplicate #{key} header")));
            }
            if !documents.is_empty() {
                return Err(err(format!("#{key} header after the first document")));
            }
            continue;
        }
        let (Some(s), Some(k)) = (&shape, kind) else {
            return Err(err(
                "document before the #shape and #kind headers".to_string()
            ));
        };
        documents.push(Document::parse(line, k, s).map_err(|e| err(e.to_string()))?);
    }
    match (shape, kind) {
        (Some(shape), Some(kind)) => Ok(Corpus {
            shape,
            kind,
            documents,
        }),
        (None, _) => Err(Error::parse("missing #shape header")),
        (_, None) => Err(Error::parse("missing #kind header")),
    }
}

/// Parses a query file: the corpus format with exactly one document.
pub fn parse_query(text: &str) -> Result<Query> {
    let mut c = parse_corpus(text)?;
    if c.documents.len() != 1 {
        return Err(Error::parse(format!(
            "a query holds exactly one document, found {}",
            c.documents.len()
        )));
    }
    Ok(Query {
        shape: c.shape,
        kind: c.kind,
        document: c.documents.remove(0),
    })
}

/// tf-idf weights of one document, keyed by term.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub shape: Partition,
    pub weights: BTreeMap<Term, f64>,
}

impl WeightVector {
    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &WeightVector) -> f64 {
        self.weights
            .iter()
            .filter_map(|(t, w)| other.weights.get(t).map(|v| w * v))
            .fold(0.0, |acc, x| acc + x)
    }

    pub fn scale(&self, c: f64) -> WeightVector {
        WeightVector {
            shape: self.shape.clone(),
            weights: self
                .weights
                .iter()
                .map(|(t, w)| (t.clone(), c * w))
                .collect(),
        }
    }
}

/// Document frequencies of a corpus, computed once.
struct Frequencies<'a> {
    n: usize,
    df: BTreeMap<&'a Term, usize>,
}

impl<'a> Frequencies<'a> {
    fn of(corpus: &'a Corpus) -> Result<Self> {
        if corpus.documents.is_empty() {
            return Err(Error::invalid("corpus has no documents"));
        }
        let mut df = BTreeMap::new();
        for d in &corpus.documents {
            for t in d.terms().iter().collect::<BTreeSet<_>>() {
                *df.entry(t).or_insert(0) += 1;
            }
        }
        Ok(Frequencies {
            n: corpus.documents.len(),
            df,
        })
    }

    fn idf(&self, t: &Term) -> f64 {
        match self.df.get(t) {
            None => 0.0,
            Some(&df) => (self.n as f64 / df as f64).log10(),
        }
    }

    fn weights(&self, shape: &Partition, doc: &Document) -> WeightVector {
        let weights = doc
            .term_frequencies()
            .into_iter()
            .map(|(t, tf)| (t.clone(), tf as f64 * self.idf(t)))
            .collect();
        WeightVector {
            shape: shape.clone(),
            weights,
        }
    }
}

/// `log10(N / df)`, or `0` for a term no document contains.
pub fn idf(term: &Term, corpus: &Corpus) -> Result<f64> {
    Ok(Frequencies::of(corpus)?.idf(term))
}

/// `w_j = tf_j · idf_j` for each distinct term of `doc`.
pub fn tfidf_weights(doc: &Document, corpus: &Corpus) -> Result<WeightVector> {
    Ok(Frequencies::of(corpus)?.weights(&corpus.shape, doc))
}

/// `q·d / (|q| |d|)`.
pub fn cosine_similarity(q: &WeightVector, d: &WeightVector) -> Result<f64> {
    let (nq, nd) = (q.norm(), d.norm());
    if nq == 0.0 || nd == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(q.dot(d) / (nq * nd))
}

/// Documents by descending cosine similarity to the query; equal scores keep
/// ascending document order. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult(pub Vec<(usize, f64)>);

impl RankedResult {
    pub fn entries(&self) -> &[(usize, f64)] {
        &self.0
    }
}

pub fn rank(query: &Document, corpus: &Corpus) -> Result<RankedResult> {
    rank_with(Execution::default(), query, corpus)
}

/// A document whose weights are all zero (every term occurs in every
/// document) scores 0; a zero query is an error.
pub fn rank_with(exec: Execution, query: &Document, corpus: &Corpus) -> Result<RankedResult> {
    if let Some(t) = query
        .terms()
        .iter()
        .find(|t| t.kind() != corpus.kind || t.shape() != &corpus.shape)
    {
        return Err(Error::invalid(format!(
            "query term {t} does not match the corpus encoding ({} of shape {})",
            corpus.kind.name(),
            corpus.shape
        )));
    }
    let freq = Frequencies::of(corpus)?;
    let q = freq.weights(&corpus.shape, query);
    let nq = q.norm();
    if nq == 0.0 {
        return Err(Error::ZeroVector);
    }
    let scores = exec.map(&corpus.documents, |doc| {
        let d = freq.weights(&corpus.shape, doc);
        let nd = d.norm();
        if nd == 0.0 {
            0.0
        } else {
            q.dot(&d) / (nq * nd)
        }
    });
    let mut ranked: Vec<(usize, f64)> = scores.into_iter().enumerate().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(RankedResult(ranked))
}

/// Mean turnaround over the term occurrences of `doc`.
pub fn average_turnaround(doc: &Document, turnarounds: &BTreeMap<Term, f64>) -> Result<f64> {
    if doc.is_empty() {
        return Err(Error::invalid("empty document"));
    }
    let mut total = 0.0;
    for t in doc.terms() {
        total += turnarounds
            .get(t)
            .ok_or_else(|| Error::invalid(format!("no turnaround given for {t}")))?;
    }
    Ok(total / doc.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::enumerate_standard_tabloids;
    use crate::perm::Permutation;
    use proptest::prelude::*;

    pub(crate) const CORPUS: &str = "#shape 2,2\n#kind tabloid\n\
        Y1,3,2,4 Y1,4,2,3 Y1,4,2,3 Y3,4,1,2 Y2,3,1,4\n\
        Y1,3,2,4 Y1,2,3,4 Y1,3,2,4\n\
        Y2,4,1,3 Y1,2,3,4 Y1,2,3,4 Y2,4,1,3\n";
    const QUERY: &str = "#shape 2,2\n#kind tabloid\nY1,3,2,4 Y1,2,3,4\n";

    fn term(s: &str) -> Term {
        decode(s, &"2,2".parse().unwrap()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn parse_example_corpus() {
        let c = parse_corpus(CORPUS).unwrap();
        let lens: Vec<usize> = c.documents.iter().map(Document::len).collect();
        assert_eq!(lens, [5, 3, 4]);
        assert_eq!(c.kind, TermKind::Tabloid);
        let spaced = "# a comment\r\n#shape (2,2)\r\n#kind tabloid\r\n\r\nY1,2,3,4\r\n# note\r\n\r\nY2,1,4,3\r\n";
        let c = parse_corpus(spaced).unwrap();
        assert_eq!(c.documents.len(), 2);
        assert_eq!(c.documents[0], c.documents[1]);
    }

    #[test]
    fn parse_corpus_errors() {
        for bad in [
            "#kind tabloid\nY1,2,3,4",
            "#shape 2,2\nY1,2,3,4",
            "Y1,2,3,4\n#shape 2,2\n#kind tabloid",
            "#shape 2,2\n#kind tabloid\nY1,2,3",
            "#shape 2,2\n#kind tabloid\ny1,2,3,4",
            "#shape 2,2\n#kind tabloid\nY1,2,3,4\n#kind tableau",
            "#shape 2,2\n#shape 2,2\n#kind tabloid",
            "#shape 2,x\n#kind tabloid",
            "#shape 2,2\n#kind table",
        ] {
            assert!(matches!(parse_corpus(bad), Err(Error::Parse(_))), "{bad:?}");
        }
        assert!(parse_query(CORPUS).is_err());
        assert_eq!(parse_query(QUERY).unwrap().document.len(), 2);
    }

    #[test]
    fn idf_values() {
        let c = parse_corpus(CORPUS).unwrap();
        assert!(close(idf(&term("Y1,3,2,4"), &c).unwrap(), 0.176, 1e-3));
        assert!(close(idf(&term("Y1,4,2,3"), &c).unwrap(), 0.477, 1e-3));
        assert_eq!(idf(&term("Y1,2,3,4"), &c).unwrap(), (1.5f64).log10());
        let everywhere =
            parse_corpus("#shape 2,2\n#kind tabloid\nY1,2,3,4\nY1,2,3,4 Y1,3,2,4").unwrap();
        assert_eq!(idf(&term("Y1,2,3,4"), &everywhere).unwrap(), 0.0);
        assert_eq!(idf(&term("Y3,4,1,2"), &everywhere).unwrap(), 0.0);
        let empty = parse_corpus("#shape 2,2\n#kind tabloid\n").unwrap();
        assert!(matches!(
            idf(&term("Y1,2,3,4"), &empty),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn tfidf_scalar_examples() {
        // a term in 2 of 3 documents, occurring 10 times in the weighted one
        let sh: Partition = "2,1".parse().unwrap();
        let body = [
            "y1,2,3 ".repeat(10),
            "y1,2,3 y2,1,3".into(),
            "y3,1,2".into(),
        ]
        .join("\n");
        let c = parse_corpus(&format!("#shape 2,1\n#kind tableau\n{body}\n")).unwrap();
        let w = tfidf_weights(&c.documents[0], &c).unwrap();
        let t = decode("y1,2,3", &sh).unwrap();
        assert!(close(w.weights[&t], 1.761, 1e-3));
        // a term in 1 of 3 documents, occurring twice
        let q = Document::parse("y3,1,2 y3,1,2", TermKind::Tableau, &sh).unwrap();
        let w = tfidf_weights(&q, &c).unwrap();
        assert!(close(
            w.weights[&decode("y3,1,2", &sh).unwrap()],
            0.9542,
            1e-4
        ));
    }

    #[test]
    fn d1_weights() {
        let c = parse_corpus(CORPUS).unwrap();
        let w = tfidf_weights(&c.documents[0], &c).unwrap();
        let expected = [
            ("Y1,3,2,4", 0.176),
            ("Y1,4,2,3", 0.954),
            ("Y2,3,1,4", 0.477),
            ("Y3,4,1,2", 0.477),
        ];
        assert_eq!(w.weights.len(), expected.len());
        for (t, v) in expected {
            assert!(close(w.weights[&term(t)], v, 1e-3), "{t}");
        }
    }

    #[test]
    fn cosine_examples() {
        let c = parse_corpus(CORPUS).unwrap();
        let q = parse_query(QUERY).unwrap().document;
        let wq = tfidf_weights(&q, &c).unwrap();
        let wd2 = tfidf_weights(&c.documents[1], &c).unwrap();
        assert!(close(wq.dot(&wd2), 0.093, 1e-3));
        assert!(close(cosine_similarity(&wq, &wd2).unwrap(), 0.949, 1e-3));
        assert!(close(cosine_similarity(&wq, &wq).unwrap(), 1.0, 1e-15));
        let wd = tfidf_weights(&Document::new(vec![term("Y3,4,1,2")]), &c).unwrap();
        assert_eq!(cosine_similarity(&wq, &wd).unwrap(), 0.0);
        let zero = tfidf_weights(
            &Document::new(vec![term("Y2,1,4,3")]),
            &parse_corpus("#shape 2,2\n#kind tabloid\nY1,2,3,4").unwrap(),
        )
        .unwrap();
        assert_eq!(cosine_similarity(&zero, &wq), Err(Error::ZeroVector));
    }

    #[test]
    fn rank_example() {
        let c = parse_corpus(CORPUS).unwrap();
        let q = parse_query(QUERY).unwrap().document;
        let r = rank(&q, &c).unwrap();
        let order: Vec<usize> = r.entries().iter().map(|e| e.0).collect();
        assert_eq!(order, [1, 2, 0]);
        for ((_, s), want) in r.entries().iter().zip([0.949, 0.245, 0.105]) {
            assert!(close(*s, want, 5e-3));
        }
        assert_eq!(r, rank_with(Execution::Sequential, &q, &c).unwrap());
    }

    #[test]
    fn rank_edge_cases() {
        let one = parse_corpus("#shape 2,2\n#kind tabloid\nY1,2,3,4 Y1,3,2,4").unwrap();
        let q = Document::new(vec![term("Y1,2,3,4")]);
        // a one-document corpus gives every present term idf 0
        assert_eq!(rank(&q, &one), Err(Error::ZeroVector));

        let two = parse_corpus("#shape 2,2\n#kind tabloid\nY1,2,3,4\nY1,3,2,4\nY1,2,3,4").unwrap();
        let r = rank(&q, &two).unwrap();
        assert_eq!(r.entries()[0], (0, 1.0));
        assert_eq!(r.entries()[1], (2, 1.0));
        assert_eq!(r.entries()[2], (1, 0.0));

        let sh: Partition = "2,2".parse().unwrap();
        let wrong_kind = Document::new(vec![decode("y1,2,3,4", &sh).unwrap()]);
        assert!(matches!(
            rank(&wrong_kind, &two),
            Err(Error::InvalidArgument(_))
        ));
        let empty = parse_corpus("#shape 2,2\n#kind tabloid").unwrap();
        assert!(matches!(rank(&q, &empty), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn average_turnarounds() {
        let c = parse_corpus(CORPUS).unwrap();
        let map: BTreeMap<Term, f64> = [
            ("Y1,2,3,4", 15.0),
            ("Y1,3,2,4", 23.0),
            ("Y1,4,2,3", 20.0),
            ("Y2,3,1,4", 23.0),
            ("Y2,4,1,3", 20.0),
            ("Y3,4,1,2", 28.0),
        ]
        .into_iter()
        .map(|(k, v)| (term(k), v))
        .collect();
        assert!(close(
            average_turnaround(&c.documents[0], &map).unwrap(),
            22.8,
            1e-12
        ));
        assert!(close(
            average_turnaround(&c.documents[2], &map).unwrap(),
            17.5,
            1e-12
        ));
        assert_eq!(
            average_turnaround(&Document::new(vec![term("Y2,4,1,3")]), &map).unwrap(),
            20.0
        );
        assert!(average_turnaround(&Document::new(vec![]), &map).is_err());
        let mut partial = map.clone();
        partial.remove(&term("Y2,4,1,3"));
        assert!(average_turnaround(&c.documents[2], &partial).is_err());
    }

    fn arb_corpus() -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<usize>, Vec<u32>, f64)> {
        let doc = proptest::collection::vec(0usize..6, 1..8);
        (
            proptest::collection::vec(doc.clone(), 2..7),
            doc,
            Just(vec![1u32, 2, 3, 4]).prop_shuffle(),
            0.1f64..50.0,
        )
    }

    proptest! {
        #[test]
        fn ranking_properties((docs, query, p, c) in arb_corpus()) {
            let sh: Partition = "2,2".parse().unwrap();
            let basis = enumerate_standard_tabloids(&sh).unwrap();
            let to_doc = |idx: &Vec<usize>| Document::new(idx.iter().map(|&i| Term::Tabloid(basis[i].clone())).collect());
            let corpus = Corpus { shape: sh.clone(), kind: TermKind::Tabloid, documents: docs.iter().map(to_doc).collect() };
            let q = to_doc(&query);
            let Ok(r) = rank(&q, &corpus) else {
                // only a zero query is rejected
                let freq = Frequencies::of(&corpus).unwrap();
                prop_assert_eq!(freq.weights(&sh, &q).norm(), 0.0);
                return Ok(());
            };
            let mut idx: Vec<usize> = r.entries().iter().map(|e| e.0).collect();
            for w in r.entries().windows(2) {
                prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
            }
            for &(_, s) in r.entries() {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
            }
            idx.sort_unstable();
            prop_assert_eq!(idx, (0..docs.len()).collect::<Vec<_>>());

            // relabelling tasks leaves every score unchanged
            let p = Permutation::from_images(p).unwrap();
            let relabel = |d: &Document| Document::new(d.terms().iter().map(|t| t.act(&p).unwrap()).collect());
            let moved = Corpus { documents: corpus.documents.iter().map(relabel).collect(), ..corpus.clone() };
            let r2 = rank(&relabel(&q), &moved).unwrap();
            let by_index = |r: &RankedResult| { let mut v = r.entries().to_vec(); v.sort_by_key(|e| e.0); v };
            for (a, b) in by_index(&r).iter().zip(by_index(&r2)) {
                prop_assert!((a.1 - b.1).abs() < 1e-12);
            }

            // duplicating a term inside a document never changes idf
            let mut dup = corpus.clone();
            let first = dup.documents[0].terms()[0].clone();
            dup.documents[0].0.push(first.clone());
            prop_assert_eq!(idf(&first, &dup).unwrap(), idf(&first, &corpus).unwrap());

            // scaling a weight vector leaves the cosine unchanged
            let freq = Frequencies::of(&corpus).unwrap();
            let wq = freq.weights(&sh, &q);
            let wd = freq.weights(&sh, &corpus.documents[0]);
            if wd.norm() > 0.0 {
                let a = cosine_similarity(&wq, &wd).unwrap();
                let b = cosine_similarity(&wq, &wd.scale(c)).unwrap();
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn average_lies_between_extremes(doc in proptest::collection::vec(0usize..6, 1..10), times in proptest::collection::vec(1.0f64..100.0, 6)) {
            let sh: Partition = "2,2".parse().unwrap();
            let basis = enumerate_standard_tabloids(&sh).unwrap();
            let map: BTreeMap<Term, f64> = basis.iter().cloned().map(Term::Tabloid).zip(times.iter().copied()).collect();
            let d = Document::new(doc.iter().map(|&i| Term::Tabloid(basis[i].clone())).collect());
            let avg = average_turnaround(&d, &map).unwrap();
            let lo = doc.iter().map(|&i| times[i]).fold(f64::INFINITY, f64::min);
            let hi = doc.iter().map(|&i| times[i]).fold(0.0, f64::max);
            prop_assert!(avg >= lo - 1e-12 && avg <= hi + 1e-12);
        }
    }
}
