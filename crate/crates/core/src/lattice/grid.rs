use serde::{Deserialize, Serialize};

use crate::error::{ensure_param, Result};

/// A rectangular 0/1 grid stored row-major; `get(r, c)` is row `r`, column `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    width: usize,
    height: usize,
    cells: Vec<u8>,
}

impl Grid {
    pub fn new(width: usize, height: usize, cells: Vec<u8>) -> Result<Self> {
        ensure_param!(width > 0 && height > 0, "grid must be nonempty, got {width}x{height}");
        ensure_param!(
            cells.len() == width * height,
            "grid {width}x{height} needs {} cells, got {}",
            width * height,
            cells.len()
        );
        ensure_param!(cells.iter().all(|&v| v <= 1), "grid cells must be 0 or 1");
        Ok(Grid { width, height, cells })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Grid::new(width, height, vec![value; width * height])
    }

    /// Builds a grid cell by cell from `f(row, col)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut cells = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                cells.push(u8::from(f(r, c)));
            }
        }
        Grid::new(width, height, cells)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.cells[row * self.width + col] = u8::from(value);
    }

    pub fn transpose(&self) -> Grid {
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in 0..self.width {
            for r in 0..self.height {
                cells.push(self.get(r, c));
            }
        }
        Grid { width: self.height, height: self.width, cells }
    }

    pub fn ones_fraction(&self) -> f64 {
        self.cells.iter().map(|&v| v as usize).sum::<usize>() as f64 / self.cells.len() as f64
    }

    /// True when the `n x n` window with top-left corner `(row, col)` is all zero.
    pub fn window_is_zero(&self, row: usize, col: usize, n: usize) -> bool {
        (row..row + n).all(|r| self.cells[r * self.width + col..r * self.width + col + n].iter().all(|&v| v == 0))
    }

    /// Pointwise order.
    pub fn le(&self, other: &Grid) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.cells.iter().zip(&other.cells).all(|(a, b)| a <= b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_round_trip() {
        let g = Grid::from_fn(3, 2, |r, c| (r + 2 * c) % 3 == 0).unwrap();
        let t = g.transpose();
        assert_eq!((t.width(), t.height()), (2, 3));
        assert_eq!(t.get(2, 1), g.get(1, 2));
        assert_eq!(t.transpose(), g);
    }

    #[test]
    fn rejects_empty_and_bad_cells() {
        assert!(Grid::new(0, 3, vec![]).is_err());
        assert!(Grid::new(1, 1, vec![2]).is_err());
    }

    #[test]
    fn zero_windows() {
        let mut g = Grid::filled(4, 4, 0).unwrap();
        g.set(0, 3, true);
        assert!(g.window_is_zero(0, 0, 3));
        assert!(!g.window_is_zero(0, 1, 3));
    }
}
