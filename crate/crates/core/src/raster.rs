//! Grid data model and ingestion for images and simulation histories.
//!
//! Pixel `(col, row)` has its center at `(col, row)`; `y` increases
//! upward. PGM ingestion flips the stored row order so the visually
//! bottom image row becomes `row = 0`. CSV grids are *not* flipped: file
//! row 0 maps to grid row 0, matching simulation lattices whose origin
//! sits in the lower-left cell.

use crate::geom::GeomPoint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("truncated data: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("unsupported magic number {0:?} (only P2 and P5 are accepted)")]
    UnsupportedMagic(String),
    #[error("ragged rows: row {row} has {found} cells, expected {expected}")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("non-numeric cell {cell:?} at row {row}, column {col}")]
    NonNumericCell { row: usize, col: usize, cell: String },
    #[error("field {name:?} is {found_w}x{found_h}, expected {want_w}x{want_h}")]
    FieldDimensionMismatch {
        name: String,
        found_w: usize,
        found_h: usize,
        want_w: usize,
        want_h: usize,
    },
    #[error("bad dimensions: width and height must be at least 1")]
    BadDimensions,
    #[error("value length {found} does not match width*height = {expected}")]
    BadValueLength { found: usize, expected: usize },
    #[error("grid values not representable in PGM (need integers in 0..=65535), offending value {0}")]
    ValueRange(f64),
    #[error("empty field list")]
    EmptyFieldList,
}

/// Integer pixel address (column, row).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PixelCoord {
    pub col: u32,
    pub row: u32,
}

impl PixelCoord {
    pub const fn new(col: u32, row: u32) -> Self {
        Self { col, row }
    }

    /// Center of the pixel in geometry coordinates.
    pub fn center(self) -> GeomPoint {
        GeomPoint::new(self.col as f64, self.row as f64)
    }
}

/// Rectangular raster of one scalar field plus optional auxiliary layers
/// of identical dimensions. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    width: usize,
    height: usize,
    values: Vec<f64>,
    aux: Vec<(String, Vec<f64>)>,
}

impl Grid {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::BadDimensions);
        }
        if values.len() != width * height {
            return Err(RasterError::BadValueLength {
                found: values.len(),
                expected: width * height,
            });
        }
        Ok(Self {
            width,
            height,
            values,
            aux: Vec::new(),
        })
    }

    pub fn with_aux(
        width: usize,
        height: usize,
        values: Vec<f64>,
        aux: Vec<(String, Vec<f64>)>,
    ) -> Result<Self, RasterError> {
        let mut grid = Self::new(width, height, values)?;
        for (name, layer) in &aux {
            if layer.len() != width * height {
                return Err(RasterError::FieldDimensionMismatch {
                    name: name.clone(),
                    found_w: layer.len(),
                    found_h: 1,
                    want_w: width,
                    want_h: height,
                });
            }
        }
        grid.aux = aux;
        Ok(grid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, col: usize, row: usize) -> f64 {
        debug_assert!(col < self.width && row < self.height);
        self.values[row * self.width + col]
    }

    /// Value lookup tolerating out-of-range indices.
    pub fn get(&self, col: i64, row: i64) -> Option<f64> {
        if col < 0 || row < 0 || col as usize >= self.width || row as usize >= self.height {
            None
        } else {
            Some(self.value(col as usize, row as usize))
        }
    }

    pub fn aux_fields(&self) -> &[(String, Vec<f64>)] {
        &self.aux
    }

    pub fn aux_names(&self) -> Vec<&str> {
        self.aux.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn aux_value(&self, index: usize, col: usize, row: usize) -> f64 {
        self.aux[index].1[row * self.width + col]
    }
}

/// Boolean selection per grid cell. Cells outside the grid count as
/// unselected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl SelectionMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut mask = Self::new(width, height);
        for row in 0..height {
            for col in 0..width {
                mask.bits[row * width + col] = f(col, row);
            }
        }
        mask
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn set(&mut self, col: usize, row: usize, on: bool) {
        self.bits[row * self.width + col] = on;
    }

    /// True when `(col, row)` is inside the grid and selected.
    pub fn selected(&self, col: i64, row: i64) -> bool {
        if col < 0 || row < 0 || col as usize >= self.width || row as usize >= self.height {
            false
        } else {
            self.bits[row as usize * self.width + col as usize]
        }
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn selected_pixels(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        (0..self.height).flat_map(move |row| {
            (0..self.width).filter_map(move |col| {
                if self.bits[row * self.width + col] {
                    Some(PixelCoord::new(col as u32, row as u32))
                } else {
                    None
                }
            })
        })
    }
}

/// Selects cells with `lo <= value <= hi` (both bounds inclusive).
pub fn threshold_select(grid: &Grid, lo: f64, hi: f64) -> SelectionMask {
    assert!(lo <= hi, "threshold_select requires lo <= hi");
    SelectionMask {
        width: grid.width,
        height: grid.height,
        bits: grid
            .values
            .iter()
            .map(|&v| v >= lo && v <= hi)
            .collect(),
    }
}

struct PgmTokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmTokens<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    /// Next whitespace-separated token, skipping `#` comments.
    fn next(&mut self) -> Option<&'a [u8]> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos >= self.bytes.len() {
                return None;
            }
            if self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            let start = self.pos;
            while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            return Some(&self.bytes[start..self.pos]);
        }
    }

    fn next_usize(&mut self, what: &str) -> Result<usize, RasterError> {
        let tok = self
            .next()
            .ok_or_else(|| RasterError::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                RasterError::MalformedHeader(format!(
                    "invalid {what}: {:?}",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

/// Parses a PGM stream (plain `P2` or raw `P5`, maxval <= 65535) into a
/// grid, flipping rows to the y-up convention.
pub fn load_pgm(bytes: &[u8]) -> Result<Grid, RasterError> {
    let mut toks = PgmTokens::new(bytes);
    let magic = toks
        .next()
        .ok_or_else(|| RasterError::MalformedHeader("empty input".into()))?;
    let magic = String::from_utf8_lossy(magic).into_owned();
    if magic != "P2" && magic != "P5" {
        return Err(RasterError::UnsupportedMagic(magic));
    }
    let width = toks.next_usize("width")?;
    let height = toks.next_usize("height")?;
    let maxval = toks.next_usize("maxval")?;
    if width == 0 || height == 0 {
        return Err(RasterError::BadDimensions);
    }
    if maxval == 0 || maxval > 65535 {
        return Err(RasterError::MalformedHeader(format!(
            "maxval {maxval} out of range 1..=65535"
        )));
    }
    let n = width * height;
    let mut samples = Vec::with_capacity(n);
    if magic == "P2" {
        for _ in 0..n {
            match toks.next() {
                Some(tok) => {
                    let v: usize = std::str::from_utf8(tok)
                        .ok()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| {
                            RasterError::MalformedHeader(format!(
                                "invalid sample {:?}",
                                String::from_utf8_lossy(tok)
                            ))
                        })?;
                    samples.push(v as f64);
                }
                None => {
                    return Err(RasterError::TruncatedData {
                        expected: n,
                        found: samples.len(),
                    })
                }
            }
        }
    } else {
        // raw: exactly one whitespace byte after maxval, then binary samples
        let mut pos = toks.pos;
        if pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let wide = maxval > 255;
        let per = if wide { 2 } else { 1 };
        let avail = (bytes.len() - pos) / per;
        if avail < n {
            return Err(RasterError::TruncatedData {
                expected: n,
                found: avail,
            });
        }
        for i in 0..n {
            let v = if wide {
                u16::from_be_bytes([bytes[pos + 2 * i], bytes[pos + 2 * i + 1]]) as f64
            } else {
                bytes[pos + i] as f64
            };
            samples.push(v);
        }
    }
    // flip rows: file row 0 is the visual top, grid row 0 the bottom
    let mut values = vec![0.0; n];
    for file_row in 0..height {
        let grid_row = height - 1 - file_row;
        let src = &samples[file_row * width..(file_row + 1) * width];
        values[grid_row * width..(grid_row + 1) * width].copy_from_slice(src);
    }
    Grid::new(width, height, values)
}

/// Serializes a grid as raw `P5`, flipping rows back to image order.
/// All values must be nonnegative integers <= 65535.
pub fn save_pgm(grid: &Grid) -> Result<Vec<u8>, RasterError> {
    let mut maxval = 255u32;
    for &v in &grid.values {
        if v < 0.0 || v > 65535.0 || v.fract() != 0.0 || !v.is_finite() {
            return Err(RasterError::ValueRange(v));
        }
        if v > 255.0 {
            maxval = 65535;
        }
    }
    let mut out = Vec::new();
    out.extend_from_slice(format!("P5\n{} {}\n{}\n", grid.width, grid.height, maxval).as_bytes());
    for file_row in 0..grid.height {
        let grid_row = grid.height - 1 - file_row;
        for col in 0..grid.width {
            let v = grid.value(col, grid_row) as u32;
            if maxval > 255 {
                out.extend_from_slice(&(v as u16).to_be_bytes());
            } else {
                out.push(v as u8);
            }
        }
    }
    Ok(out)
}

fn parse_csv_table(name: &str, text: &str) -> Result<(usize, usize, Vec<f64>), RasterError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row_idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (col_idx, cell) in line.split(',').enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| RasterError::NonNumericCell {
                row: row_idx,
                col: col_idx,
                cell: cell.trim().to_string(),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(RasterError::MalformedHeader(format!(
            "field {name:?} has no data rows"
        )));
    }
    let width = rows[0].len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(RasterError::RaggedRows {
                row: i,
                found: row.len(),
                expected: width,
            });
        }
    }
    let height = rows.len();
    let values = rows.into_iter().flatten().collect();
    Ok((width, height, values))
}

/// Loads a grid from comma-separated numeric tables, one per named field.
/// The first field becomes the grid values, the rest auxiliary layers.
/// File row 0 maps to grid row 0 (no flip).
pub fn load_csv_grid(fields: &[(&str, &str)]) -> Result<Grid, RasterError> {
    let (&(first_name, first_text), rest) =
        fields.split_first().ok_or(RasterError::EmptyFieldList)?;
    let (width, height, values) = parse_csv_table(first_name, first_text)?;
    let mut aux = Vec::new();
    for &(name, text) in rest {
        let (w, h, layer) = parse_csv_table(name, text)?;
        if w != width || h != height {
            return Err(RasterError::FieldDimensionMismatch {
                name: name.to_string(),
                found_w: w,
                found_h: h,
                want_w: width,
                want_h: height,
            });
        }
        aux.push((name.to_string(), layer));
    }
    Grid::with_aux(width, height, values, aux)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pgm_single_cell() {
        let g = load_pgm(b"P2\n1 1\n255\n7\n").unwrap();
        assert_eq!((g.width(), g.height()), (1, 1));
        assert_eq!(g.value(0, 0), 7.0);
    }

    #[test]
    fn pgm_flip_convention() {
        // file rows top-to-bottom: "0 255" then "255 0";
        // after the flip grid row 1 (the visual top) holds 0, 255.
        let g = load_pgm(b"P2\n2 2\n255\n0 255\n255 0\n").unwrap();
        assert_eq!(g.value(0, 1), 0.0);
        assert_eq!(g.value(1, 1), 255.0);
        assert_eq!(g.value(0, 0), 255.0);
        assert_eq!(g.value(1, 0), 0.0);
    }

    #[test]
    fn pgm_rejects_color_magic() {
        assert!(matches!(
            load_pgm(b"P3\n1 1\n255\n1 2 3\n"),
            Err(RasterError::UnsupportedMagic(m)) if m == "P3"
        ));
    }

    #[test]
    fn pgm_truncated_and_malformed() {
        assert!(matches!(
            load_pgm(b"P2\n2 2\n255\n1 2 3\n"),
            Err(RasterError::TruncatedData { expected: 4, found: 3 })
        ));
        assert!(matches!(
            load_pgm(b"P2\n2\n"),
            Err(RasterError::MalformedHeader(_))
        ));
        assert!(matches!(
            load_pgm(b"P5\n2 2\n70000\n"),
            Err(RasterError::MalformedHeader(_))
        ));
    }

    #[test]
    fn pgm_raw_16bit() {
        let mut bytes = b"P5\n2 1\n65535\n".to_vec();
        bytes.extend_from_slice(&300u16.to_be_bytes());
        bytes.extend_from_slice(&7u16.to_be_bytes());
        let g = load_pgm(&bytes).unwrap();
        assert_eq!(g.value(0, 0), 300.0);
        assert_eq!(g.value(1, 0), 7.0);
    }

    #[test]
    fn pgm_comments_in_header() {
        let g = load_pgm(b"P2 # magic\n# a comment line\n1 1\n255\n9\n").unwrap();
        assert_eq!(g.value(0, 0), 9.0);
    }

    #[test]
    fn csv_basic_and_errors() {
        let g = load_csv_grid(&[("t", "1,2\n3,4\n")]).unwrap();
        assert_eq!((g.width(), g.height()), (2, 2));
        // no flip: file row 0 is grid row 0
        assert_eq!(g.value(0, 0), 1.0);
        assert_eq!(g.value(1, 1), 4.0);

        let g = load_csv_grid(&[("t", "1,2,3\n4,5,6\n")]).unwrap();
        assert_eq!((g.width(), g.height()), (3, 2));

        assert!(matches!(
            load_csv_grid(&[("t", "1,2\n3\n")]),
            Err(RasterError::RaggedRows { .. })
        ));
        assert!(matches!(
            load_csv_grid(&[("t", "1,x\n")]),
            Err(RasterError::NonNumericCell { .. })
        ));
        assert!(matches!(
            load_csv_grid(&[("t", "1,2\n3,4\n"), ("v", "1,2,3\n4,5,6\n")]),
            Err(RasterError::FieldDimensionMismatch { .. })
        ));
    }

    #[test]
    fn csv_aux_fields_attach() {
        let g = load_csv_grid(&[("t", "1,2\n3,4\n"), ("vx", "0,1\n2,3\n")]).unwrap();
        assert_eq!(g.aux_names(), vec!["vx"]);
        assert_eq!(g.aux_value(0, 1, 1), 3.0);
    }

    #[test]
    fn threshold_inclusive_bounds() {
        let g = Grid::new(3, 1, vec![0.0, 150.0, 151.0]).unwrap();
        let m = threshold_select(&g, 0.0, 150.0);
        assert_eq!(
            (m.selected(0, 0), m.selected(1, 0), m.selected(2, 0)),
            (true, true, false)
        );

        let g = Grid::new(2, 1, vec![104.0, 105.0]).unwrap();
        let m = threshold_select(&g, 105.0, 255.0);
        assert_eq!((m.selected(0, 0), m.selected(1, 0)), (false, true));

        let g = Grid::new(2, 1, vec![42.0, 42.0]).unwrap();
        let m = threshold_select(&g, 42.0, 42.0);
        assert_eq!(m.count(), 2);
    }

    proptest! {
        #[test]
        fn pgm_round_trip(w in 1usize..12, h in 1usize..12, seed in any::<u64>()) {
            let mut v = seed;
            let mut next = move || { v = v.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (v >> 33) as u32 };
            let values: Vec<f64> = (0..w*h).map(|_| (next() % 256) as f64).collect();
            let g = Grid::new(w, h, values).unwrap();
            let bytes = save_pgm(&g).unwrap();
            let g2 = load_pgm(&bytes).unwrap();
            prop_assert_eq!(g, g2);
        }

        #[test]
        fn threshold_widening_is_monotone(
            vals in proptest::collection::vec(0u8..=255, 1..64),
            lo in 0u8..=255, hi in 0u8..=255, grow in 0u8..=60,
        ) {
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            let w = vals.len();
            let g = Grid::new(w, 1, vals.iter().map(|&v| v as f64).collect()).unwrap();
            let narrow = threshold_select(&g, lo as f64, hi as f64);
            let wide = threshold_select(&g, lo.saturating_sub(grow) as f64, hi.saturating_add(grow) as f64);
            for c in 0..w as i64 {
                prop_assert!(!narrow.selected(c, 0) || wide.selected(c, 0));
            }
        }
    }
}
