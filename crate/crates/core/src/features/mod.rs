//! Handcrafted descriptors and their concatenation into a single feature vector.
//!
//! Families are always concatenated in the canonical order
//! `raw, hist, dct, hog, lbp, glcm, wavelet`, whatever order they were requested in.
//!
//! Value scales differ per family: `raw` and `dct` work on pixels scaled to
//! `[0, 1]`, `hist` bins the raw 8-bit values, and the grayscale descriptors
//! (`hog`, `lbp`, `glcm`, `wavelet`) work on luma in `[0, 255]`.

mod color;
mod dct;
mod glcm;
mod gray;
mod hog;
mod lbp;
mod wavelet;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::ImageRecord;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub use self::color::{extract_hist, extract_raw, HIST_BINS_PER_CHANNEL};
pub use self::dct::{dct2, extract_dct, DCT_BLOCK};
pub use self::glcm::{cooccurrence, extract_glcm, glcm_properties, quantize, GLCM_LEVELS, GLCM_OFFSETS};
pub use self::gray::{to_grayscale, GrayImage};
pub use self::hog::{cell_histograms, extract_hog, extract_hog_with, gradients, HogParams};
pub use self::lbp::{extract_lbp, lbp_codes, lbp_histogram, uniform_code};
pub use self::wavelet::{dwt1, dwt2, dwt2_plane, extract_wavelet, Subbands, WaveletFilters};

/// One descriptor family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Raw,
    Hist,
    Dct,
    Hog,
    Lbp,
    Glcm,
    Wavelet,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Raw,
        Family::Hist,
        Family::Dct,
        Family::Hog,
        Family::Lbp,
        Family::Glcm,
        Family::Wavelet,
    ];

    pub fn dimension(self) -> usize {
        match self {
            Family::Raw => 3072,
            Family::Hist => 48,
            Family::Dct => 192,
            Family::Hog => 324,
            Family::Lbp => 16,
            Family::Glcm => 16,
            Family::Wavelet => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Raw => "raw",
            Family::Hist => "hist",
            Family::Dct => "dct",
            Family::Hog => "hog",
            Family::Lbp => "lbp",
            Family::Glcm => "glcm",
            Family::Wavelet => "wavelet",
        }
    }

    fn uses_gray(self) -> bool {
        matches!(self, Family::Hog | Family::Lbp | Family::Glcm | Family::Wavelet)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown feature family {s:?}")))
    }
}

/// An ordered, duplicate-free set of active families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureSpec {
    families: Vec<Family>,
}

impl FeatureSpec {
    pub fn new(families: impl IntoIterator<Item = Family>) -> Result<Self> {
        let mut families: Vec<Family> = families.into_iter().collect();
        families.sort_unstable();
        families.dedup();
        if families.is_empty() {
            return Err(Error::Config("feature spec needs at least one family".into()));
        }
        Ok(Self { families })
    }

    /// raw + hist + dct
    pub fn baseline() -> Self {
        Self::new([Family::Raw, Family::Hist, Family::Dct]).unwrap()
    }

    /// hog + lbp + glcm + wavelet
    pub fn advanced() -> Self {
        Self::new([Family::Hog, Family::Lbp, Family::Glcm, Family::Wavelet]).unwrap()
    }

    pub fn mixed() -> Self {
        Self::new(Family::ALL).unwrap()
    }

    /// Accepts a preset name or a `+`-joined family list such as `raw+dct`.
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.trim() {
            "baseline" => Ok(Self::baseline()),
            "advanced" => Ok(Self::advanced()),
            "mixed" => Ok(Self::mixed()),
            other => Self::new(
                other
                    .split('+')
                    .map(str::parse)
                    .collect::<Result<Vec<Family>>>()?,
            ),
        }
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn contains(&self, family: Family) -> bool {
        self.families.contains(&family)
    }

    pub fn dimension(&self) -> usize {
        self.families.iter().map(|f| f.dimension()).sum()
    }

    /// Column range of `family` inside the assembled vector, if active.
    pub fn offset_of(&self, family: Family) -> Option<std::ops::Range<usize>> {
        let mut start = 0;
        for &f in &self.families {
            if f == family {
                return Some(start..start + f.dimension());
            }
            start += f.dimension();
        }
        None
    }

    /// Canonical tag: the preset name when the set matches one, otherwise a `+`-joined list.
    pub fn tag(&self) -> String {
        if *self == Self::baseline() {
            "baseline".into()
        } else if *self == Self::advanced() {
            "advanced".into()
        } else if *self == Self::mixed() {
            "mixed".into()
        } else {
            self.families.iter().map(|f| f.name()).collect::<Vec<_>>().join("+")
        }
    }
}

impl fmt::Display for FeatureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for FeatureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// An assembled descriptor vector tagged with the spec that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector<T> {
    pub values: Vec<T>,
    pub spec_tag: String,
}

impl<T> FeatureVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Writes the active families of `image` into `out` (length `spec.dimension()`).
pub fn assemble_into<T: Real>(image: &ImageRecord, spec: &FeatureSpec, out: &mut [T]) {
    assert_eq!(out.len(), spec.dimension(), "output slot has wrong width");
    let gray = spec
        .families()
        .iter()
        .any(|f| f.uses_gray())
        .then(|| to_grayscale::<T>(image));
    let mut at = 0;
    for &family in spec.families() {
        let block = &mut out[at..at + family.dimension()];
        let values = match family {
            Family::Raw => extract_raw(image),
            Family::Hist => extract_hist(image),
            Family::Dct => extract_dct(image),
            Family::Hog => extract_hog(gray.as_ref().unwrap()),
            Family::Lbp => extract_lbp(gray.as_ref().unwrap()),
            Family::Glcm => extract_glcm(gray.as_ref().unwrap()),
            Family::Wavelet => extract_wavelet(gray.as_ref().unwrap()),
        };
        block.copy_from_slice(&values);
        at += family.dimension();
    }
}

pub fn assemble_features<T: Real>(image: &ImageRecord, spec: &FeatureSpec) -> FeatureVector<T> {
    let mut values = vec![T::zero(); spec.dimension()];
    assemble_into(image, spec, &mut values);
    FeatureVector {
        values,
        spec_tag: spec.tag(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_image(seed: u64) -> ImageRecord {
        let mut rng = SplitMix64::new(seed);
        let px: Vec<u8> = (0..3072).map(|_| rng.below(256) as u8).collect();
        ImageRecord::new(&px, 0, "rand").unwrap()
    }

    #[test]
    fn preset_dimensions() {
        assert_eq!(FeatureSpec::baseline().dimension(), 3312);
        assert_eq!(FeatureSpec::advanced().dimension(), 361);
        assert_eq!(FeatureSpec::mixed().dimension(), 3673);
    }

    #[test]
    fn tags_are_canonical() {
        assert_eq!(FeatureSpec::parse("dct+raw").unwrap().tag(), "raw+dct");
        assert_eq!(FeatureSpec::parse("hist+dct+raw").unwrap().tag(), "baseline");
        assert_eq!(FeatureSpec::parse("mixed").unwrap(), FeatureSpec::mixed());
        assert!(FeatureSpec::parse("raw+sift").is_err());
        assert!(FeatureSpec::parse("").is_err());
    }

    #[test]
    fn assembled_lengths_and_order() {
        let img = random_image(3);
        let mixed = assemble_features::<f64>(&img, &FeatureSpec::mixed());
        assert_eq!(mixed.len(), 3673);
        assert_eq!(mixed.values[..3072], extract_raw::<f64>(&img)[..]);
        let wav = extract_wavelet(&to_grayscale::<f64>(&img));
        assert_eq!(mixed.values[3668..], wav[..]);
        assert_eq!(assemble_features::<f64>(&img, &FeatureSpec::baseline()).len(), 3312);
        assert_eq!(assemble_features::<f64>(&img, &FeatureSpec::advanced()).len(), 361);
    }

    #[test]
    fn family_offsets() {
        let spec = FeatureSpec::mixed();
        assert_eq!(spec.offset_of(Family::Hog), Some(3312..3636));
        assert_eq!(FeatureSpec::advanced().offset_of(Family::Raw), None);
    }

    #[test]
    fn extraction_is_pure() {
        let img = random_image(11);
        let a = assemble_features::<f64>(&img, &FeatureSpec::mixed());
        let b = assemble_features::<f64>(&img, &FeatureSpec::mixed());
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn fuzz_outputs_are_finite() {
        let spec = FeatureSpec::mixed();
        for seed in 0..1000 {
            let v = assemble_features::<f64>(&random_image(seed), &spec);
            assert!(v.values.iter().all(|x| x.is_finite()), "seed {seed}");
        }
    }

    #[test]
    fn works_in_single_precision() {
        let img = random_image(5);
        let v32 = assemble_features::<f32>(&img, &FeatureSpec::advanced());
        let v64 = assemble_features::<f64>(&img, &FeatureSpec::advanced());
        for (a, b) in v32.values.iter().zip(&v64.values) {
            assert!((*a as f64 - b).abs() <= 1e-3 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }
}
