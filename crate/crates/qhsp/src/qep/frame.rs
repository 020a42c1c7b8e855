//! Ciphertext wire format.
//!
//! Layout (all multi-byte integers little-endian):
//!
//! ```text
//! offset 0   magic "QEP1"
//! offset 4   version 0x01
//! offset 5   k: u16                     invariant factor count
//! offset 7   k x u32                    invariant factors n_j (each >= 2)
//! ...        E: u64                     element count
//! ...        L: u64                     plaintext byte length
//! ...        E x k x u32                element coordinates, c_j < n_j
//! ```
//!
//! Deserialization reports the byte offset of the first violation.

use super::QepError;
use crate::groups::{AbelianGroup, GroupElement};

pub const MAGIC: [u8; 4] = *b"QEP1";
pub const VERSION: u8 = 0x01;

/// A parsed ciphertext: group descriptor header plus the ordered element
/// sequence (data and chaff interleaved).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiphertextFrame {
    group: AbelianGroup,
    plaintext_len: u64,
    elements: Vec<GroupElement>,
}

impl CiphertextFrame {
    pub fn new(group: AbelianGroup, plaintext_len: u64, elements: Vec<GroupElement>) -> Self {
        debug_assert!(elements.iter().all(|e| e.coords().len() == group.rank()));
        CiphertextFrame {
            group,
            plaintext_len,
            elements,
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn plaintext_len(&self) -> u64 {
        self.plaintext_len
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element_count(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Replace one element (tamper helper for tests and experiments).
    pub fn with_element(&self, position: usize, e: GroupElement) -> CiphertextFrame {
        let mut elements = self.elements.clone();
        elements[position] = e;
        CiphertextFrame {
            group: self.group.clone(),
            plaintext_len: self.plaintext_len,
            elements,
        }
    }

    pub fn serialize(&self) -> Vec<u8> {
        let k = self.group.rank();
        let mut out = Vec::with_capacity(7 + 4 * k + 16 + self.elements.len() * 4 * k);
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&(k as u16).to_le_bytes());
        for &n in self.group.invariant_factors() {
            debug_assert!(n <= u32::MAX as u64);
            out.extend_from_slice(&(n as u32).to_le_bytes());
        }
        out.extend_from_slice(&self.element_count().to_le_bytes());
        out.extend_from_slice(&self.plaintext_len.to_le_bytes());
        for e in &self.elements {
            for &c in e.coords() {
                out.extend_from_slice(&(c as u32).to_le_bytes());
            }
        }
        out
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self, QepError> {
        let mut r = Reader { bytes, pos: 0 };
        let magic = r.take(4, "magic")?;
        if magic != MAGIC {
            return Err(malformed(0, "bad magic"));
        }
        let version_at = r.pos;
        let version = r.take(1, "version")?[0];
        if version != VERSION {
            return Err(malformed(version_at, "unknown version"));
        }
        let k = u16::from_le_bytes(r.take(2, "factor count")?.try_into().unwrap()) as usize;
        if k == 0 {
            return Err(malformed(5, "empty factor list"));
        }
        let mut factors = Vec::with_capacity(k);
        for _ in 0..k {
            let at = r.pos;
            let n = u32::from_le_bytes(r.take(4, "invariant factor")?.try_into().unwrap());
            if n < 2 {
                return Err(malformed(at, "invariant factor below 2"));
            }
            factors.push(n as u64);
        }
        let group =
            AbelianGroup::new(&factors).map_err(|_| malformed(7, "invalid factor list"))?;
        let count = u64::from_le_bytes(r.take(8, "element count")?.try_into().unwrap());
        let plaintext_len = u64::from_le_bytes(r.take(8, "plaintext length")?.try_into().unwrap());
        let mut elements = Vec::new();
        for _ in 0..count {
            let mut coords = Vec::with_capacity(k);
            for j in 0..k {
                let at = r.pos;
                let c = u32::from_le_bytes(r.take(4, "coordinate")?.try_into().unwrap()) as u64;
                if c >= factors[j] {
                    return Err(malformed(at, "coordinate out of range"));
                }
                coords.push(c as i64);
            }
            elements.push(group.element(&coords).unwrap());
        }
        if r.pos != bytes.len() {
            return Err(malformed(r.pos, "trailing bytes"));
        }
        Ok(CiphertextFrame {
            group,
            plaintext_len,
            elements,
        })
    }
}

fn malformed(offset: usize, reason: &'static str) -> QepError {
    QepError::MalformedFrame {
        offset: offset as u64,
        reason,
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &'static str) -> Result<&'a [u8], QepError> {
        if self.pos + len > self.bytes.len() {
            return Err(QepError::MalformedFrame {
                offset: self.bytes.len() as u64,
                reason: what,
            });
        }
        let out = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_frame() -> CiphertextFrame {
        let g = AbelianGroup::new(&[8, 4, 2]).unwrap();
        let elements = vec![
            g.element(&[1, 2, 1]).unwrap(),
            g.element(&[7, 0, 0]).unwrap(),
        ];
        CiphertextFrame::new(g, 5, elements)
    }

    #[test]
    fn round_trip_example() {
        let f = sample_frame();
        assert_eq!(CiphertextFrame::deserialize(&f.serialize()).unwrap(), f);
    }

    #[test]
    fn truncation_is_malformed() {
        let bytes = sample_frame().serialize();
        for cut in 0..bytes.len() {
            let err = CiphertextFrame::deserialize(&bytes[..cut]).unwrap_err();
            assert!(matches!(err, QepError::MalformedFrame { .. }), "cut {cut}");
        }
    }

    #[test]
    fn wrong_magic_reports_offset_zero() {
        let mut bytes = sample_frame().serialize();
        bytes[0] = b'X';
        match CiphertextFrame::deserialize(&bytes).unwrap_err() {
            QepError::MalformedFrame { offset, .. } => assert_eq!(offset, 0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_version_and_bad_factor_and_trailer() {
        let f = sample_frame();
        let mut bytes = f.serialize();
        bytes[4] = 0x02;
        match CiphertextFrame::deserialize(&bytes).unwrap_err() {
            QepError::MalformedFrame { offset, .. } => assert_eq!(offset, 4),
            other => panic!("unexpected error {other:?}"),
        }

        let mut bytes = f.serialize();
        bytes[7] = 1; // first factor becomes 1
        bytes[8] = 0;
        match CiphertextFrame::deserialize(&bytes).unwrap_err() {
            QepError::MalformedFrame { offset, .. } => assert_eq!(offset, 7),
            other => panic!("unexpected error {other:?}"),
        }

        let mut bytes = f.serialize();
        bytes.push(0);
        assert!(matches!(
            CiphertextFrame::deserialize(&bytes).unwrap_err(),
            QepError::MalformedFrame {
                reason: "trailing bytes",
                ..
            }
        ));
    }

    #[test]
    fn oversized_coordinate_is_malformed() {
        let f = sample_frame();
        let mut bytes = f.serialize();
        let coords_at = bytes.len() - 2 * 3 * 4;
        bytes[coords_at] = 8; // first coordinate of first element: 8 >= n_1 = 8
        assert!(matches!(
            CiphertextFrame::deserialize(&bytes).unwrap_err(),
            QepError::MalformedFrame {
                reason: "coordinate out of range",
                ..
            }
        ));
    }

    proptest! {
        #[test]
        fn round_trip_random_frames(
            factors in proptest::collection::vec(2u64..64, 1..4),
            count in 0usize..12,
            len in 0u64..64,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let g = AbelianGroup::new(&factors).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let elements = (0..count).map(|_| g.random_element(&mut rng)).collect();
            let f = CiphertextFrame::new(g, len, elements);
            let bytes = f.serialize();
            prop_assert_eq!(CiphertextFrame::deserialize(&bytes).unwrap(), f);
            let _ = rng.gen::<u8>();
        }
    }
}
