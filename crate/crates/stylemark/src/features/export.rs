//! Columnar CSV export/import for feature vectors and content counts.
//!
//! Values never contain commas (book ids are restricted and items are
//! tokenizer output), so the format needs no quoting. Lines starting with
//! `#` are comments; writers accept extra header comments, readers skip
//! them.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use thiserror::Error;

use super::{
    bigram_inventory, scalar_metrics, trigram_inventory, ContentCategory, ContentCounts, DocId,
    FeatureVector, LexicalVector, SyntacticVector, WORD_LENGTH_BINS,
};
use crate::corpus::VariantId;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> ExportError {
    ExportError::Parse { line, message: message.into() }
}

fn feature_header() -> Vec<String> {
    let mut cols = vec!["book_id".to_string(), "variant".to_string()];
    cols.extend(scalar_metrics().iter().map(|(name, _)| name.to_string()));
    cols.extend((1..=WORD_LENGTH_BINS).map(|k| format!("wordlen_{k}")));
    cols.extend(bigram_inventory().iter().map(|g| format!("bigram_{g}")));
    cols.extend(trigram_inventory().iter().map(|g| format!("trigram_{g}")));
    cols
}

/// Writes one row per document: scalar metrics, word-length bins, and
/// n-gram ratio columns. `comments` become leading `#` lines.
pub fn write_features_csv(
    mut w: impl Write,
    vectors: &[FeatureVector],
    comments: &[String],
) -> Result<(), ExportError> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "{}", feature_header().join(","))?;
    for v in vectors {
        let mut fields: Vec<String> =
            vec![v.doc_id.book_id.clone(), v.doc_id.variant.to_string()];
        for (_, metric) in scalar_metrics() {
            fields.push(metric(v).to_string());
        }
        for bin in &v.lexical.word_length_dist {
            fields.push(bin.to_string());
        }
        for g in bigram_inventory() {
            fields.push(v.lexical.bigram_ratios.get(*g).copied().unwrap_or(0.0).to_string());
        }
        for g in trigram_inventory() {
            fields.push(v.lexical.trigram_ratios.get(*g).copied().unwrap_or(0.0).to_string());
        }
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Reads a file written by [`write_features_csv`]. Content categories are
/// not part of this file, so `content` comes back empty.
pub fn read_features_csv(r: impl BufRead) -> Result<Vec<FeatureVector>, ExportError> {
    let expected = feature_header();
    let mut vectors = Vec::new();
    let mut saw_header = false;
    for (idx, line) in r.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if !saw_header {
            if fields != expected.iter().map(String::as_str).collect::<Vec<_>>() {
                return Err(parse_err(line_no, "unexpected feature csv header"));
            }
            saw_header = true;
            continue;
        }
        if fields.len() != expected.len() {
            return Err(parse_err(
                line_no,
                format!("expected {} fields, got {}", expected.len(), fields.len()),
            ));
        }
        vectors.push(parse_feature_row(&fields, line_no)?);
    }
    if !saw_header {
        return Err(parse_err(0, "missing feature csv header"));
    }
    Ok(vectors)
}

fn parse_feature_row(fields: &[&str], line: usize) -> Result<FeatureVector, ExportError> {
    let mut it = fields.iter();
    let mut next = || -> Result<&str, ExportError> {
        it.next().copied().ok_or_else(|| parse_err(line, "row too short"))
    };
    let book_id = next()?.to_string();
    let variant: VariantId = next()?
        .parse()
        .map_err(|e| parse_err(line, format!("{e}")))?;
    let mut scalars = Vec::with_capacity(scalar_metrics().len());
    for (name, _) in scalar_metrics() {
        let raw = next()?;
        let value: f64 = raw
            .parse()
            .map_err(|_| parse_err(line, format!("bad value {raw:?} for {name}")))?;
        scalars.push(value);
    }
    let mut word_length_dist = Vec::with_capacity(WORD_LENGTH_BINS);
    for _ in 0..WORD_LENGTH_BINS {
        let raw = next()?;
        word_length_dist.push(
            raw.parse::<f64>()
                .map_err(|_| parse_err(line, format!("bad word-length bin {raw:?}")))?,
        );
    }
    let mut read_ratios = |inventory: &[&'static str]| -> Result<BTreeMap<String, f64>, ExportError> {
        let mut map = BTreeMap::new();
        let mut any_nonzero = false;
        for g in inventory {
            let raw = it.next().copied().ok_or_else(|| parse_err(line, "row too short"))?;
            let value: f64 = raw
                .parse()
                .map_err(|_| parse_err(line, format!("bad ratio {raw:?} for {g}")))?;
            if value != 0.0 {
                any_nonzero = true;
            }
            map.insert(g.to_string(), value);
        }
        // all-zero columns mean the document had no listed n-grams
        Ok(if any_nonzero { map } else { BTreeMap::new() })
    };
    let bigram_ratios = read_ratios(bigram_inventory())?;
    let trigram_ratios = read_ratios(trigram_inventory())?;

    Ok(FeatureVector {
        doc_id: DocId { book_id, variant },
        lexical: LexicalVector {
            char_count: scalars[0] as u64,
            total_words: scalars[1] as u64,
            chars_per_word: scalars[2],
            vocab_richness: scalars[3],
            word_length_dist,
            bigram_ratios,
            trigram_ratios,
        },
        syntactic: SyntacticVector {
            sentence_length: scalars[7],
            punct_per_char: scalars[8],
            function_word_freq: scalars[9],
            transition_word_freq: scalars[10],
            simple_pct: scalars[11],
            complex_pct: scalars[12],
        },
        content: BTreeMap::new(),
    })
}

/// Writes one content category for many documents: one row per
/// (document, item) pair.
pub fn write_content_csv(
    mut w: impl Write,
    docs: &[(DocId, ContentCounts)],
    comments: &[String],
) -> Result<(), ExportError> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "book_id,variant,category,item,count")?;
    for (doc_id, counts) in docs {
        for (item, count) in &counts.counts {
            writeln!(
                w,
                "{},{},{},{},{}",
                doc_id.book_id, doc_id.variant, counts.category, item, count
            )?;
        }
    }
    Ok(())
}

/// Reads a file written by [`write_content_csv`]. Rows for the same
/// document must be contiguous (as written); all rows must share one
/// category.
pub fn read_content_csv(
    r: impl BufRead,
) -> Result<(ContentCategory, Vec<(DocId, ContentCounts)>), ExportError> {
    let mut docs: Vec<(DocId, ContentCounts)> = Vec::new();
    let mut category: Option<ContentCategory> = None;
    let mut saw_header = false;
    for (idx, line) in r.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed != "book_id,variant,category,item,count" {
                return Err(parse_err(line_no, "unexpected content csv header"));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        let [book_id, variant, cat, item, count] = fields.as_slice() else {
            return Err(parse_err(line_no, "expected 5 fields"));
        };
        let variant: VariantId = variant.parse().map_err(|e| parse_err(line_no, format!("{e}")))?;
        let cat: ContentCategory = cat.parse().map_err(|_| parse_err(line_no, "bad category"))?;
        match category {
            None => category = Some(cat),
            Some(c) if c == cat => {}
            Some(c) => {
                return Err(parse_err(
                    line_no,
                    format!("mixed categories in one file: {c} and {cat}"),
                ))
            }
        }
        let count: u64 = count
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad count {count:?}")))?;
        let doc_id = DocId { book_id: book_id.to_string(), variant };
        match docs.last_mut() {
            Some((last_id, counts)) if *last_id == doc_id => {
                counts.counts.insert(item.to_string(), count);
                counts.total += count;
            }
            _ => {
                let mut counts = ContentCounts { category: cat, counts: BTreeMap::new(), total: 0 };
                counts.counts.insert(item.to_string(), count);
                counts.total = count;
                docs.push((doc_id, counts));
            }
        }
    }
    let category = category.ok_or_else(|| parse_err(0, "content csv has no data rows"))?;
    Ok((category, docs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TranslationDoc;
    use crate::features::{extract_doc, FeatureConfig};
    use crate::textproc::PosTagger;
    use std::io::Cursor;

    fn sample_vectors() -> Vec<FeatureVector> {
        let cfg = FeatureConfig::builtin().unwrap();
        let texts = [
            ("b1", VariantId::HT, "He sighed. Looking up, she saw the pale sky."),
            ("b1", VariantId::S2S, "The road ran north. It was long and cold."),
        ];
        texts
            .iter()
            .map(|(id, variant, text)| {
                extract_doc(
                    &TranslationDoc {
                        book_id: id.to_string(),
                        variant: *variant,
                        text: text.to_string(),
                    },
                    &cfg,
                    PosTagger::builtin(),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn features_csv_round_trips_scalars() {
        let vectors = sample_vectors();
        let mut buf = Vec::new();
        write_features_csv(&mut buf, &vectors, &["seed=42".to_string()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# seed=42\n"));
        let back = read_features_csv(Cursor::new(&buf)).unwrap();
        assert_eq!(back.len(), vectors.len());
        for (a, b) in vectors.iter().zip(&back) {
            assert_eq!(a.doc_id, b.doc_id);
            assert_eq!(a.lexical, b.lexical);
            assert_eq!(a.syntactic, b.syntactic);
        }
    }

    #[test]
    fn content_csv_round_trips() {
        let cfg = FeatureConfig::builtin().unwrap();
        let doc = TranslationDoc {
            book_id: "b1".to_string(),
            variant: VariantId::CTX,
            text: "his eyes. his eyes saw her face".to_string(),
        };
        let counts = crate::features::content_counts(
            &doc,
            ContentCategory::WordBigrams,
            &cfg,
            PosTagger::builtin(),
        )
        .unwrap();
        let rows = vec![(DocId::new("b1", VariantId::CTX), counts)];
        let mut buf = Vec::new();
        write_content_csv(&mut buf, &rows, &[]).unwrap();
        let (cat, back) = read_content_csv(Cursor::new(&buf)).unwrap();
        assert_eq!(cat, ContentCategory::WordBigrams);
        assert_eq!(back, rows);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let data = b"book_id,variant,category,item,count\nb1,HT,words,the,NaNcy\n";
        let err = read_content_csv(Cursor::new(&data[..])).unwrap_err();
        match err {
            ExportError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
