//! Reader for labeled CSV files: header `truth,prediction[,weight]`, blank lines and
//! `#` comment lines ignored.

use std::io::Read;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCsv {
    pub truth: Vec<usize>,
    pub prediction: Vec<usize>,
    /// `None` when the file has no weight column.
    pub weights: Option<Vec<f64>>,
    /// Source line of each row.
    pub lines: Vec<u64>,
}

impl LabeledCsv {
    pub fn max_class(&self) -> usize {
        self.truth
            .iter()
            .chain(&self.prediction)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Fails on the first row holding a label of `k` or more.
    pub fn check_classes(&self, k: usize) -> Result<(), CliError> {
        let rows = self.truth.iter().zip(&self.prediction).zip(&self.lines);
        for ((&t, &c), &line) in rows {
            if t.max(c) >= k {
                return Err(parse_error(
                    line,
                    format!("label {} is out of range for {k} classes", t.max(c)),
                ));
            }
        }
        Ok(())
    }
}

fn parse_error(line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_class(field: &str, column: &str, line: u64) -> Result<usize, CliError> {
    field
        .parse()
        .map_err(|_| parse_error(line, format!("{column} '{field}' is not a class index")))
}

fn parse_weight(field: &str, line: u64) -> Result<f64, CliError> {
    match field.parse::<f64>() {
        Ok(w) if w.is_finite() && w > 0.0 => Ok(w),
        _ => Err(parse_error(
            line,
            format!("weight '{field}' is not a positive number"),
        )),
    }
}

pub fn read_labeled<R: Read>(mut source: R) -> Result<LabeledCsv, CliError> {
    let mut text = Vec::new();
    source
        .read_to_end(&mut text)
        .map_err(|e| CliError::io("input", e))?;
    // the reader's own line counter skips blank lines, so count from byte offsets,
    // stepping over the blank and comment lines a record position may start on
    let line_at = |pos: Option<&csv::Position>| {
        pos.map_or(0, |p| {
            let mut i = (p.byte() as usize).min(text.len());
            while i < text.len() {
                match text[i] {
                    b'\n' | b'\r' => i += 1,
                    b'#' => {
                        i += text[i..]
                            .iter()
                            .position(|&b| b == b'\n')
                            .unwrap_or(text.len() - i)
                    }
                    _ => break,
                }
            }
            text[..i].iter().filter(|&&b| b == b'\n').count() as u64 + 1
        })
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_slice());

    let header = reader
        .headers()
        .map_err(|e| parse_error(1, e.to_string()))?
        .clone();
    let header_line = line_at(header.position()).max(1);
    let names: Vec<String> = header.iter().map(str::to_ascii_lowercase).collect();
    let has_weight = match names.as_slice() {
        [t, c] if t == "truth" && c == "prediction" => false,
        [t, c, w] if t == "truth" && c == "prediction" && w == "weight" => true,
        _ => {
            return Err(parse_error(
                header_line,
                format!(
                    "expected header truth,prediction[,weight], found '{}'",
                    header.iter().collect::<Vec<_>>().join(",")
                ),
            ))
        }
    };
    let width = if has_weight { 3 } else { 2 };

    let mut data = LabeledCsv {
        truth: Vec::new(),
        prediction: Vec::new(),
        weights: has_weight.then(Vec::new),
        lines: Vec::new(),
    };
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(line_at(e.position()), e.to_string()))?;
        let line = line_at(record.position());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != width {
            return Err(parse_error(
                line,
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        data.truth.push(parse_class(&record[0], "truth", line)?);
        data.prediction
            .push(parse_class(&record[1], "prediction", line)?);
        if let Some(weights) = data.weights.as_mut() {
            weights.push(parse_weight(&record[2], line)?);
        }
        data.lines.push(line);
    }
    if data.truth.is_empty() {
        return Err(CliError::Usage("input has no data rows".into()));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_comments_and_blank_lines() {
        let text = "# generated\ntruth,prediction,weight\n\n1,1,2.5\n# middle\n0, 1 ,1\n\n";
        let data = read_labeled(text.as_bytes()).unwrap();
        assert_eq!(data.truth, vec![1, 0]);
        assert_eq!(data.prediction, vec![1, 1]);
        assert_eq!(data.weights, Some(vec![2.5, 1.0]));
    }

    #[test]
    fn weight_column_is_optional() {
        let data = read_labeled("truth,prediction\n0,1\n2,2\n".as_bytes()).unwrap();
        assert_eq!(data.weights, None);
        assert_eq!(data.max_class(), 2);
        assert!(data.check_classes(3).is_ok());
        assert!(matches!(
            data.check_classes(2),
            Err(CliError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn reports_line_numbers() {
        let text = "truth,prediction,weight\n1,1,1\n\n1,x,1\n";
        match read_labeled(text.as_bytes()) {
            Err(CliError::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("prediction"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match read_labeled("truth,prediction\n# note\n\n# more\n0,1\n\n2,-1\n".as_bytes()) {
            Err(CliError::Parse { line: 7, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match read_labeled("truth,prediction,weight\n1,1,0\n".as_bytes()) {
            Err(CliError::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match read_labeled("truth,prediction\n1,1,1\n".as_bytes()) {
            Err(CliError::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_header() {
        assert!(matches!(
            read_labeled("t,c\n1,1\n".as_bytes()),
            Err(CliError::Parse { line: 1, .. })
        ));
    }
}
