//! Line-oriented skeleton CSV.
//!
//! ```text
//! J=<joints>,C=<coords>[,CONF=1]
//! x00,y00,x01,y01,...[,conf0,conf1,...]    one line per frame
//! ```
//!
//! Coordinates are joint-major; the optional confidence columns follow.

use std::io::{BufRead, Write};

use ndarray::{Array2, Array3, ArrayView2, ArrayView3};

use super::{Result, SkeletonError, SkeletonSequence, TaylorSkeletonSequence};
use crate::taylor::Channel;

struct Header {
    joints: usize,
    coords: usize,
    confidence: bool,
}

fn parse_error(line: usize, message: impl Into<String>) -> SkeletonError {
    SkeletonError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(text: &str) -> Result<Header> {
    let (mut joints, mut coords, mut confidence) = (None, None, false);
    for field in text.split(',') {
        let (key, value) = field
            .trim()
            .split_once('=')
            .ok_or_else(|| parse_error(1, format!("expected key=value, found {field:?}")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| parse_error(1, format!("{key} must be an integer, found {value:?}")))?;
        match key.trim() {
            "J" => joints = Some(value),
            "C" => coords = Some(value),
            "CONF" => confidence = value != 0,
            other => return Err(parse_error(1, format!("unknown header key {other:?}"))),
        }
    }
    match (joints, coords) {
        (Some(j), Some(c)) if j > 0 && c > 0 => Ok(Header {
            joints: j,
            coords: c,
            confidence,
        }),
        _ => Err(parse_error(1, "header needs positive J and C")),
    }
}

pub fn read_skeleton_csv(reader: impl BufRead) -> Result<SkeletonSequence> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break parse_header(&line)?;
                }
            }
            None => return Err(parse_error(1, "missing header")),
        }
    };
    let width = header.joints * header.coords;
    let expected = width + if header.confidence { header.joints } else { 0 };
    let mut coords = Vec::new();
    let mut conf = Vec::new();
    let mut frames = 0;
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_error(idx + 1, format!("not a number: {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != expected {
            return Err(parse_error(
                idx + 1,
                format!("expected {expected} values, found {}", values.len()),
            ));
        }
        coords.extend_from_slice(&values[..width]);
        conf.extend_from_slice(&values[width..]);
        frames += 1;
    }
    if frames == 0 {
        return Err(parse_error(2, "no frames"));
    }
    let coords = Array3::from_shape_vec((frames, header.joints, header.coords), coords)
        .expect("row lengths checked");
    let confidence = header.confidence.then(|| {
        Array2::from_shape_vec((frames, header.joints), conf).expect("row lengths checked")
    });
    SkeletonSequence::new(coords, confidence)
}

fn write_rows(
    coords: ArrayView3<'_, f64>,
    confidence: Option<ArrayView2<'_, f64>>,
    mut writer: impl Write,
) -> Result<()> {
    let (_, joints, dims) = coords.dim();
    write!(writer, "J={joints},C={dims}")?;
    if confidence.is_some() {
        write!(writer, ",CONF=1")?;
    }
    writeln!(writer)?;
    for (i, frame) in coords.outer_iter().enumerate() {
        let conf_row = confidence.map(|c| c.row(i).to_vec()).unwrap_or_default();
        let row: Vec<String> = frame
            .iter()
            .chain(conf_row.iter())
            .map(|v| v.to_string())
            .collect();
        writeln!(writer, "{}", row.join(","))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_sequence_csv(seq: &SkeletonSequence, writer: impl Write) -> Result<()> {
    write_rows(seq.coords(), seq.confidence(), writer)
}

/// Writes the displacement channel in the input CSV schema. Sequences with
/// more than one channel cannot be represented and are rejected.
pub fn write_taylor_skeleton_csv(seq: &TaylorSkeletonSequence, writer: impl Write) -> Result<()> {
    if seq.channels() != [Channel::Displacement] {
        return Err(SkeletonError::InvalidConfig(
            "CSV output holds only the displacement channel; use TLV1 for more".to_string(),
        ));
    }
    let coords = seq.data().index_axis(ndarray::Axis(1), 0);
    write_rows(coords, seq.confidence(), writer)
}

#[cfg(test)]
mod tests {
    use super::super::{skeleton_taylor, SkeletonChannels, SkeletonConfig};
    use super::*;

    const SAMPLE: &str = "J=2,C=2,CONF=1\n\
        0,0,1,1,0.9,0.8\n\
        0.1,0,1.5,1,0.9,0.7\n\
        0.3,0,2,1,1,0.6\n\
        0.6,0,2.5,1,1,0.5\n";

    #[test]
    fn parses_header_and_rows() {
        let seq = read_skeleton_csv(SAMPLE.as_bytes()).unwrap();
        assert_eq!(
            (seq.num_frames(), seq.num_joints(), seq.num_coords()),
            (4, 2, 2)
        );
        assert_eq!(seq.coords()[[3, 0, 0]], 0.6);
        assert_eq!(seq.coords()[[1, 1, 0]], 1.5);
        assert_eq!(seq.confidence().unwrap()[[2, 1]], 0.6);
    }

    #[test]
    fn transform_and_write() {
        let seq = read_skeleton_csv(SAMPLE.as_bytes()).unwrap();
        let out = skeleton_taylor(&seq, &SkeletonConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_taylor_skeleton_csv(&out, &mut buf).unwrap();
        let back = read_skeleton_csv(&buf[..]).unwrap();
        assert_eq!(back.num_frames(), 1);
        assert_eq!(back.coords(), out.data().index_axis(ndarray::Axis(1), 0));
        assert_eq!(back.confidence().unwrap().row(0).to_vec(), vec![0.9, 0.8]);
        assert!((back.coords()[[0, 0, 0]] - 0.1).abs() < 1e-12);
        assert!((back.coords()[[0, 1, 0]] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn input_round_trip_is_exact() {
        let seq = read_skeleton_csv(SAMPLE.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_sequence_csv(&seq, &mut buf).unwrap();
        assert_eq!(read_skeleton_csv(&buf[..]).unwrap(), seq);
    }

    #[test]
    fn multi_channel_csv_is_rejected() {
        let seq = read_skeleton_csv(SAMPLE.as_bytes()).unwrap();
        let cfg = SkeletonConfig {
            channels: SkeletonChannels::All,
            ..SkeletonConfig::default()
        };
        let out = skeleton_taylor(&seq, &cfg).unwrap();
        assert!(matches!(
            write_taylor_skeleton_csv(&out, Vec::new()),
            Err(SkeletonError::InvalidConfig(_))
        ));
    }

    #[test]
    fn malformed_input() {
        for (text, line) in [
            ("", 1),
            ("J=2\n1,2\n", 1),
            ("J=1,C=1,X=3\n1\n", 1),
            ("J=1,C=2\n1,2\n3\n", 3),
            ("J=1,C=1\nabc\n", 2),
            ("J=1,C=1\n", 2),
        ] {
            match read_skeleton_csv(text.as_bytes()) {
                Err(SkeletonError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }
}
