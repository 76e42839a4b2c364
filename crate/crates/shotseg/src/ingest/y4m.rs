//! YUV4MPEG2 stream reading and writing.
//!
//! Header grammar: the ASCII signature `YUV4MPEG2` followed by
//! space-separated parameters (`W`, `H`, `F<num>:<den>`, `I`, `A`, `C`,
//! `X`) terminated by `0x0A`. Each frame is a `FRAME` marker line
//! followed by the raw planes. Only the luma plane is kept; chroma is
//! skipped by its computed size.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::ingest::{resize_bilinear, GrayFrame};

const SIGNATURE: &str = "YUV4MPEG2";
const MAX_HEADER_LEN: usize = 4096;

/// Chroma subsampling layout of a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChromaMode {
    /// `C420`, `C420jpeg`, `C420paldv`, `C420mpeg2`: quarter-size chroma.
    C420,
    /// `C422`: half-width chroma.
    C422,
    /// `C444`: full-size chroma.
    C444,
    /// `Cmono`: no chroma planes.
    Mono,
}

impl ChromaMode {
    fn parse(tag: &str) -> Result<ChromaMode> {
        match tag {
            "420" | "420jpeg" | "420paldv" | "420mpeg2" => Ok(ChromaMode::C420),
            "422" => Ok(ChromaMode::C422),
            "444" => Ok(ChromaMode::C444),
            "mono" => Ok(ChromaMode::Mono),
            other => Err(Error::UnsupportedChroma(format!("C{other}"))),
        }
    }

    /// Total size in bytes of both chroma planes for one frame.
    pub fn chroma_bytes(&self, width: usize, height: usize) -> usize {
        match self {
            ChromaMode::C420 => 2 * width.div_ceil(2) * height.div_ceil(2),
            ChromaMode::C422 => 2 * width.div_ceil(2) * height,
            ChromaMode::C444 => 2 * width * height,
            ChromaMode::Mono => 0,
        }
    }
}

/// Parsed stream-level header of a Y4M file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamInfo {
    pub width: usize,
    pub height: usize,
    /// Frames per second as a (numerator, denominator) pair.
    pub frame_rate: (u32, u32),
    pub chroma_mode: ChromaMode,
    /// Y4M streams do not carry a frame count; populated only when the
    /// whole stream has been read.
    pub frame_count: Option<usize>,
}

/// Parse the stream header, leaving the reader positioned at the first
/// `FRAME` marker.
pub fn parse_y4m_header(reader: &mut impl BufRead) -> Result<StreamInfo> {
    let line = read_header_line(reader)?;
    let mut tokens = line.split(' ').filter(|t| !t.is_empty());

    match tokens.next() {
        Some(sig) if sig == SIGNATURE => {}
        _ => return Err(Error::MissingSignature),
    }

    let mut width = None;
    let mut height = None;
    let mut rate = None;
    let mut chroma = ChromaMode::C420;

    for token in tokens {
        let (letter, value) = token.split_at(1);
        match letter {
            "W" => width = Some(parse_usize(token, value)?),
            "H" => height = Some(parse_usize(token, value)?),
            "F" => rate = Some(parse_ratio(token, value)?),
            "C" => chroma = ChromaMode::parse(value)?,
            // Interlacing, aspect ratio, and extensions do not affect
            // the luma layout.
            "I" | "A" | "X" => {}
            _ => return Err(Error::UnknownHeaderParameter(token.to_string())),
        }
    }

    let width = width.ok_or(Error::MissingHeaderParameter("W"))?;
    let height = height.ok_or(Error::MissingHeaderParameter("H"))?;
    let frame_rate = rate.ok_or(Error::MissingHeaderParameter("F"))?;
    if width == 0 || height == 0 {
        return Err(Error::InvalidHeaderValue(line));
    }
    Ok(StreamInfo {
        width,
        height,
        frame_rate,
        chroma_mode: chroma,
        frame_count: None,
    })
}

fn read_header_line(reader: &mut impl BufRead) -> Result<String> {
    let mut buf = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        match reader.read(&mut byte)? {
            0 => return Err(Error::MissingSignature),
            _ => {
                if byte[0] == 0x0A {
                    break;
                }
                buf.push(byte[0]);
                if buf.len() > MAX_HEADER_LEN {
                    return Err(Error::InvalidHeaderValue("header too long".into()));
                }
            }
        }
    }
    String::from_utf8(buf).map_err(|_| Error::MissingSignature)
}

fn parse_usize(token: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::InvalidHeaderValue(token.to_string()))
}

fn parse_ratio(token: &str, value: &str) -> Result<(u32, u32)> {
    let (num, den) = value
        .split_once(':')
        .ok_or_else(|| Error::InvalidHeaderValue(token.to_string()))?;
    let num: u32 = num
        .parse()
        .map_err(|_| Error::InvalidHeaderValue(token.to_string()))?;
    let den: u32 = den
        .parse()
        .map_err(|_| Error::InvalidHeaderValue(token.to_string()))?;
    if num == 0 || den == 0 {
        return Err(Error::InvalidHeaderValue(token.to_string()));
    }
    Ok((num, den))
}

/// Sequential frame reader over a parsed Y4M stream.
pub struct Y4mReader<R> {
    reader: R,
    info: StreamInfo,
    frames_read: usize,
}

impl<R: BufRead> Y4mReader<R> {
    pub fn new(mut reader: R) -> Result<Y4mReader<R>> {
        let info = parse_y4m_header(&mut reader)?;
        Ok(Y4mReader {
            reader,
            info,
            frames_read: 0,
        })
    }

    pub fn info(&self) -> &StreamInfo {
        &self.info
    }

    /// Read the next frame's raw luma plane, or `None` at end of stream.
    pub fn next_raw_luma(&mut self) -> Result<Option<Vec<u8>>> {
        // Frame marker line, or clean EOF.
        let mut marker = Vec::new();
        let mut byte = [0u8; 1];
        loop {
            match self.reader.read(&mut byte)? {
                0 => {
                    if marker.is_empty() {
                        return Ok(None);
                    }
                    return Err(Error::MalformedFrameMarker(
                        String::from_utf8_lossy(&marker).into_owned(),
                    ));
                }
                _ => {
                    if byte[0] == 0x0A {
                        break;
                    }
                    marker.push(byte[0]);
                    if marker.len() > MAX_HEADER_LEN {
                        return Err(Error::MalformedFrameMarker("marker too long".into()));
                    }
                }
            }
        }
        let ok = marker == b"FRAME" || marker.starts_with(b"FRAME ");
        if !ok {
            return Err(Error::MalformedFrameMarker(
                String::from_utf8_lossy(&marker).into_owned(),
            ));
        }

        let y_len = self.info.width * self.info.height;
        let mut luma = vec![0u8; y_len];
        read_full(&mut self.reader, &mut luma, y_len)?;

        let chroma_len = self
            .info
            .chroma_mode
            .chroma_bytes(self.info.width, self.info.height);
        if chroma_len > 0 {
            let mut skip = vec![0u8; chroma_len];
            read_full(&mut self.reader, &mut skip, chroma_len)?;
        }
        Ok(Some(luma))
    }

    /// Read, resize, and index the next frame.
    pub fn next_frame(&mut self) -> Result<Option<GrayFrame>> {
        let Some(luma) = self.next_raw_luma()? else {
            return Ok(None);
        };
        let pixels = resize_bilinear(&luma, self.info.height, self.info.width);
        let frame = GrayFrame::new(self.frames_read, pixels);
        self.frames_read += 1;
        Ok(Some(frame))
    }
}

fn read_full(reader: &mut impl Read, buf: &mut [u8], wanted: usize) -> Result<()> {
    let mut got = 0;
    while got < wanted {
        let n = reader.read(&mut buf[got..])?;
        if n == 0 {
            return Err(Error::TruncatedFrame { wanted, got });
        }
        got += n;
    }
    Ok(())
}

/// Writer for monochrome Y4M streams (the synthetic corpus format).
pub struct Y4mWriter<W> {
    writer: W,
    width: usize,
    height: usize,
}

impl<W: Write> Y4mWriter<W> {
    /// Write the stream header for a `Cmono` stream.
    pub fn new_mono(mut writer: W, width: usize, height: usize, rate: (u32, u32)) -> Result<Y4mWriter<W>> {
        writeln!(
            writer,
            "{SIGNATURE} W{width} H{height} F{}:{} Ip A1:1 Cmono",
            rate.0, rate.1
        )?;
        Ok(Y4mWriter {
            writer,
            width,
            height,
        })
    }

    pub fn write_frame(&mut self, luma: &[u8]) -> Result<()> {
        assert_eq!(luma.len(), self.width * self.height);
        self.writer.write_all(b"FRAME\n")?;
        self.writer.write_all(luma)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}
