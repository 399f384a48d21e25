use std::io::{BufRead, BufReader, Read, Write};

use super::{IngestError, DEFAULT_FRAME_RATE_HZ};
use crate::trajectory::{Frame, RunMetadata, TrajectoryDataset};
use crate::Vec2;

pub const CSV_HEADER: &str = "frame,agent_id,x_m,y_m";

/// Canonical decimal encoding of a coordinate: at most 9 fractional digits,
/// trailing zeros trimmed, at least one digit kept after the point.
pub fn format_coord(x: f64) -> String {
    let mut s = format!("{x:.9}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.push('0');
    }
    s
}

/// Snap a coordinate to the value its canonical encoding parses back to.
/// Values recorded through this function survive an emit/parse cycle
/// bit-exactly.
pub fn quantize_coord(x: f64) -> f64 {
    format_coord(x).parse().expect("canonical encoding parses")
}

/// Parse a trajectory CSV stream. Frames may be sparse (absent cells mean
/// the agent was not visible); the returned dataset has contiguous frames
/// from zero through the highest index seen. The frame rate defaults to
/// [`DEFAULT_FRAME_RATE_HZ`]; callers with a sidecar document should
/// overwrite it.
pub fn parse_trajectories<R: Read>(reader: R) -> Result<TrajectoryDataset, IngestError> {
    let mut lines = BufReader::new(reader).lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| IngestError::ParseError {
            line: 1,
            msg: "empty input".into(),
        })?;
    if header.trim_end_matches('\r') != CSV_HEADER {
        return Err(IngestError::ParseError {
            line: 1,
            msg: format!("expected header `{CSV_HEADER}`, got `{header}`"),
        });
    }

    let mut frames: Vec<Frame> = Vec::new();
    let mut last_frame: Option<u32> = None;
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let mut next_field = |what: &str| {
            fields.next().ok_or_else(|| IngestError::ParseError {
                line: line_no,
                msg: format!("missing field `{what}`"),
            })
        };
        let frame: u32 = next_field("frame")?
            .parse()
            .map_err(|e| IngestError::ParseError {
                line: line_no,
                msg: format!("bad frame index: {e}"),
            })?;
        let agent: u32 = next_field("agent_id")?
            .parse()
            .map_err(|e| IngestError::ParseError {
                line: line_no,
                msg: format!("bad agent id: {e}"),
            })?;
        if agent == 0 {
            return Err(IngestError::ParseError {
                line: line_no,
                msg: "agent_id must be positive".into(),
            });
        }
        let x: f64 = next_field("x_m")?
            .parse()
            .map_err(|e| IngestError::ParseError {
                line: line_no,
                msg: format!("bad x coordinate: {e}"),
            })?;
        let y: f64 = next_field("y_m")?
            .parse()
            .map_err(|e| IngestError::ParseError {
                line: line_no,
                msg: format!("bad y coordinate: {e}"),
            })?;
        if fields.next().is_some() {
            return Err(IngestError::ParseError {
                line: line_no,
                msg: "too many fields".into(),
            });
        }

        if let Some(prev) = last_frame {
            if frame < prev {
                return Err(IngestError::NonMonotoneFrames { line: line_no });
            }
        }
        last_frame = Some(frame);

        if frames.len() <= frame as usize {
            frames.resize_with(frame as usize + 1, Frame::new);
        }
        if frames[frame as usize]
            .insert(agent, Vec2::new(x, y))
            .is_some()
        {
            return Err(IngestError::DuplicateCell { frame, agent });
        }
    }

    Ok(TrajectoryDataset {
        frame_rate_hz: DEFAULT_FRAME_RATE_HZ,
        frames,
        metadata: RunMetadata::ingested(),
    })
}

/// Write a dataset in the trajectory CSV format: rows sorted by frame then
/// agent id, LF line endings, canonical coordinate encoding.
pub fn emit_trajectories<W: Write>(
    dataset: &TrajectoryDataset,
    writer: &mut W,
) -> Result<(), IngestError> {
    writeln!(writer, "{CSV_HEADER}")?;
    for (frame_idx, frame) in dataset.frames.iter().enumerate() {
        for (agent, pos) in frame {
            writeln!(
                writer,
                "{},{},{},{}",
                frame_idx,
                agent,
                format_coord(pos.x),
                format_coord(pos.y)
            )?;
        }
    }
    Ok(())
}
