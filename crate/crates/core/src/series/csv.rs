//! Tick CSV ingestion and export.
//!
//! The reader is deliberately tolerant about shape (header optional,
//! columns by name or index, epoch or ISO-8601 timestamps) and strict
//! about content: malformed rows, non-positive prices and timestamp
//! regressions are hard errors carrying the offending line number.
//! Lines starting with `#` are treated as comments, so files written by
//! the CLI (which embeds its run configuration that way) round-trip.

use std::io;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::{PriceSeries, Tick};

/// A CSV column addressed either by 0-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl ColumnRef {
    /// `"3"` means index 3, anything else is a header name.
    pub fn parse(spec: &str) -> Self {
        match spec.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(spec.to_string()),
        }
    }
}

impl From<usize> for ColumnRef {
    fn from(i: usize) -> Self {
        ColumnRef::Index(i)
    }
}

impl From<&str> for ColumnRef {
    fn from(name: &str) -> Self {
        ColumnRef::Name(name.to_string())
    }
}

/// How the timestamp column is encoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeFormat {
    /// Seconds since the Unix epoch, fractional part allowed.
    EpochSeconds,
    /// ISO-8601 / RFC 3339 UTC, e.g. `2021-03-01T00:00:00.250Z`.
    /// Naive stamps (no offset, `T` or space separator) are read as UTC.
    Iso8601,
}

/// Which notion of price a row carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriceMode {
    /// A traded price in a single column.
    Trade,
    /// Mid price `(bid + ask) / 2` from two quote columns.
    MidBidAsk,
}

/// Shape of a tick CSV file.
#[derive(Debug, Clone)]
pub struct CsvFormat {
    pub has_header: bool,
    pub time: ColumnRef,
    pub price: Option<ColumnRef>,
    pub bid: Option<ColumnRef>,
    pub ask: Option<ColumnRef>,
    pub time_format: TimeFormat,
}

impl Default for CsvFormat {
    fn default() -> Self {
        Self {
            has_header: true,
            time: "time".into(),
            price: Some("price".into()),
            bid: None,
            ask: None,
            time_format: TimeFormat::EpochSeconds,
        }
    }
}

struct Columns {
    time: usize,
    price: Option<usize>,
    bid: Option<usize>,
    ask: Option<usize>,
}

fn resolve(col: &ColumnRef, headers: Option<&csv::StringRecord>) -> Result<usize> {
    match col {
        ColumnRef::Index(i) => Ok(*i),
        ColumnRef::Name(name) => headers
            .and_then(|h| h.iter().position(|field| field == name))
            .ok_or_else(|| Error::MissingColumn { column: name.clone() }),
    }
}

fn field<'r>(record: &'r csv::StringRecord, index: usize, what: &str, line: u64) -> Result<&'r str> {
    record.get(index).ok_or_else(|| Error::Row {
        line,
        reason: format!("missing {what} column at index {index}"),
    })
}

fn parse_price(text: &str, what: &str, line: u64) -> Result<f64> {
    let value: f64 = text.parse().map_err(|_| Error::Row {
        line,
        reason: format!("cannot parse {what} {text:?} as a number"),
    })?;
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Row { line, reason: format!("{what} must be positive, got {value}") });
    }
    Ok(value)
}

fn parse_time(text: &str, format: TimeFormat, line: u64) -> Result<f64> {
    match format {
        TimeFormat::EpochSeconds => text.parse().map_err(|_| Error::Row {
            line,
            reason: format!("cannot parse timestamp {text:?} as epoch seconds"),
        }),
        TimeFormat::Iso8601 => {
            let utc = if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(text) {
                dt.to_utc()
            } else {
                let naive = chrono::NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%S%.f")
                    .or_else(|_| chrono::NaiveDateTime::parse_from_str(text, "%Y-%m-%d %H:%M:%S%.f"))
                    .map_err(|_| Error::Row {
                        line,
                        reason: format!("cannot parse timestamp {text:?} as ISO-8601"),
                    })?;
                naive.and_utc()
            };
            Ok(utc.timestamp() as f64 + f64::from(utc.timestamp_subsec_nanos()) * 1e-9)
        }
    }
}

/// Read a tick CSV into a [`PriceSeries`].
///
/// Rows must be time-ordered (duplicate timestamps allowed, input order
/// kept); in [`PriceMode::MidBidAsk`] each tick's price is the bid/ask
/// midpoint. Errors name the offending line.
pub fn ingest_ticks<T: Real, R: io::Read>(
    reader: R,
    format: &CsvFormat,
    mode: PriceMode,
    label: impl Into<String>,
) -> Result<PriceSeries<T>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(format.has_header)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);

    let headers = if format.has_header { Some(csv_reader.headers()?.clone()) } else { None };
    let columns = Columns {
        time: resolve(&format.time, headers.as_ref())?,
        price: match (&format.price, mode) {
            (Some(col), PriceMode::Trade) => Some(resolve(col, headers.as_ref())?),
            (None, PriceMode::Trade) => {
                return Err(Error::MissingColumn { column: "price".into() })
            }
            _ => None,
        },
        bid: match (&format.bid, mode) {
            (Some(col), PriceMode::MidBidAsk) => Some(resolve(col, headers.as_ref())?),
            (None, PriceMode::MidBidAsk) => {
                return Err(Error::MissingColumn { column: "bid".into() })
            }
            _ => None,
        },
        ask: match (&format.ask, mode) {
            (Some(col), PriceMode::MidBidAsk) => Some(resolve(col, headers.as_ref())?),
            (None, PriceMode::MidBidAsk) => {
                return Err(Error::MissingColumn { column: "ask".into() })
            }
            _ => None,
        },
    };

    let mut ticks: Vec<Tick<T>> = Vec::new();
    let mut prev_time = f64::NEG_INFINITY;
    for record in csv_reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or_default();

        let time = parse_time(field(&record, columns.time, "time", line)?, format.time_format, line)?;
        let price = match mode {
            PriceMode::Trade => {
                let index = columns.price.expect("checked above");
                parse_price(field(&record, index, "price", line)?, "price", line)?
            }
            PriceMode::MidBidAsk => {
                let bid = parse_price(field(&record, columns.bid.unwrap(), "bid", line)?, "bid", line)?;
                let ask = parse_price(field(&record, columns.ask.unwrap(), "ask", line)?, "ask", line)?;
                (bid + ask) / 2.0
            }
        };
        if time < prev_time {
            return Err(Error::Row {
                line,
                reason: format!("timestamp {time} regresses behind {prev_time}"),
            });
        }
        prev_time = time;
        ticks.push(Tick::new(T::of(time), T::of(price)).map_err(|e| Error::Row {
            line,
            reason: e.to_string(),
        })?);
    }

    if ticks.is_empty() {
        return Err(Error::EmptyInput);
    }
    PriceSeries::new(ticks, label)
}

/// Write a series as `time,price` CSV. Scalars are printed with Rust's
/// shortest round-trip formatting, so read-back reproduces the series
/// bit for bit.
pub fn write_ticks<T: Real, W: io::Write>(mut writer: W, series: &PriceSeries<T>) -> Result<()> {
    writeln!(writer, "time,price")?;
    for tick in series.ticks() {
        writeln!(writer, "{},{}", tick.time(), tick.price())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trade_noheader() -> CsvFormat {
        CsvFormat {
            has_header: false,
            time: 0.into(),
            price: Some(1.into()),
            ..CsvFormat::default()
        }
    }

    #[test]
    fn three_rows_parse_and_span() {
        let s: PriceSeries<f64> =
            ingest_ticks("0,100\n1,101\n2,100\n".as_bytes(), &trade_noheader(), PriceMode::Trade, "t")
                .unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.span().unwrap(), 2.0);
    }

    #[test]
    fn mid_mode_averages_bid_ask() {
        let format = CsvFormat {
            has_header: false,
            time: 0.into(),
            price: None,
            bid: Some(1.into()),
            ask: Some(2.into()),
            ..CsvFormat::default()
        };
        let s: PriceSeries<f64> =
            ingest_ticks("0,99,101\n".as_bytes(), &format, PriceMode::MidBidAsk, "t").unwrap();
        assert_eq!(s.ticks()[0].price(), 100.0);
    }

    #[test]
    fn negative_price_names_line_one() {
        let err = ingest_ticks::<f64, _>("0,-5\n1,3\n".as_bytes(), &trade_noheader(), PriceMode::Trade, "t")
            .unwrap_err();
        match err {
            Error::Row { line, reason } => {
                assert_eq!(line, 1);
                assert!(reason.contains("positive"), "{reason}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn header_and_named_columns() {
        let input = "ts,px,size\n10,2.5,1\n11,2.6,9\n";
        let format = CsvFormat { time: "ts".into(), price: Some("px".into()), ..CsvFormat::default() };
        let s: PriceSeries<f64> = ingest_ticks(input.as_bytes(), &format, PriceMode::Trade, "t").unwrap();
        assert_eq!(s.ticks()[1].price(), 2.6);

        let missing = CsvFormat { time: "nope".into(), ..format };
        assert!(matches!(
            ingest_ticks::<f64, _>(input.as_bytes(), &missing, PriceMode::Trade, "t"),
            Err(Error::MissingColumn { .. })
        ));
    }

    #[test]
    fn iso8601_timestamps() {
        let input = "time,price\n2021-03-01T00:00:00Z,4.0\n2021-03-01T00:00:00.250Z,5.0\n";
        let format = CsvFormat { time_format: TimeFormat::Iso8601, ..CsvFormat::default() };
        let s: PriceSeries<f64> = ingest_ticks(input.as_bytes(), &format, PriceMode::Trade, "t").unwrap();
        assert_eq!(s.ticks()[0].time(), 1_614_556_800.0);
        assert_eq!(s.ticks()[1].time() - s.ticks()[0].time(), 0.25);

        // naive stamp with a space separator is read as UTC
        let input = "time,price\n2021-03-01 00:00:01,4.0\n";
        let s: PriceSeries<f64> = ingest_ticks(input.as_bytes(), &format, PriceMode::Trade, "t").unwrap();
        assert_eq!(s.ticks()[0].time(), 1_614_556_801.0);
    }

    #[test]
    fn regression_rejected_malformed_named() {
        let err = ingest_ticks::<f64, _>("0,1\n2,1\n1,1\n".as_bytes(), &trade_noheader(), PriceMode::Trade, "t")
            .unwrap_err();
        assert!(matches!(err, Error::Row { line: 3, .. }), "{err}");

        let err = ingest_ticks::<f64, _>("0,1\nx,2\n".as_bytes(), &trade_noheader(), PriceMode::Trade, "t")
            .unwrap_err();
        assert!(matches!(err, Error::Row { line: 2, .. }), "{err}");
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(
            ingest_ticks::<f64, _>("".as_bytes(), &trade_noheader(), PriceMode::Trade, "t"),
            Err(Error::EmptyInput)
        ));
        // header only is still empty
        assert!(matches!(
            ingest_ticks::<f64, _>("time,price\n".as_bytes(), &CsvFormat::default(), PriceMode::Trade, "t"),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn comment_lines_are_skipped() {
        let input = "# config: {\"seed\":7}\ntime,price\n0,1.5\n1,1.6\n";
        let s: PriceSeries<f64> =
            ingest_ticks(input.as_bytes(), &CsvFormat::default(), PriceMode::Trade, "t").unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn write_then_read_is_identity() {
        let ticks = vec![
            Tick::new(0.125, 1.0000000000000002f64).unwrap(),
            Tick::new(1.1, 0.9999999999999999).unwrap(),
            Tick::new(1.1, std::f64::consts::PI).unwrap(),
        ];
        let series = PriceSeries::new(ticks, "rt").unwrap();
        let mut buf = Vec::new();
        write_ticks(&mut buf, &series).unwrap();
        let back: PriceSeries<f64> =
            ingest_ticks(buf.as_slice(), &CsvFormat::default(), PriceMode::Trade, "rt").unwrap();
        assert_eq!(back.ticks(), series.ticks());
        assert_eq!(back.span().unwrap(), series.span().unwrap());
    }
}
