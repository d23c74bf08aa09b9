mod common;

use jpeg_rdh::error::Error;
use jpeg_rdh::jpeg::tables::{estimate_quality, scaled_luma_quant};
use jpeg_rdh::jpeg::{ac_code_length, encode_grayscale, parse_jpeg, scan_bits, serialize_jpeg};
use jpeg_rdh::transform::{decompress, PixelImage};
use proptest::prelude::*;
use zune_core::bytestream::ZCursor;
use zune_core::colorspace::ColorSpace;
use zune_core::options::DecoderOptions;
use zune_jpeg::JpegDecoder;

#[test]
fn every_corpus_file_roundtrips_at_coefficient_level() {
    for path in common::baseline_files() {
        let bytes = std::fs::read(&path).unwrap();
        let img = parse_jpeg(&bytes).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let out = serialize_jpeg(&img).unwrap();
        let back = parse_jpeg(&out).unwrap();
        assert!(img.same_coefficients(&back), "{}", path.display());
        // Canonical form is a fixed point.
        assert_eq!(serialize_jpeg(&back).unwrap(), out, "{}", path.display());
    }
}

#[test]
fn progressive_files_are_rejected() {
    for name in ["progressive_gray.jpg", "progressive_color.jpg"] {
        let bytes = std::fs::read(common::data_dir().join("unsupported").join(name)).unwrap();
        assert!(
            matches!(parse_jpeg(&bytes), Err(Error::UnsupportedFormat(_))),
            "{name}"
        );
    }
}

#[test]
fn garbage_is_rejected() {
    assert!(parse_jpeg(b"").is_err());
    assert!(parse_jpeg(b"GIF89a").is_err());
    assert!(parse_jpeg(&[0xff, 0xd8, 0xff, 0xd9]).is_err());
}

#[test]
fn restart_intervals_survive_reserialization() {
    let files: Vec<_> = common::baseline_files()
        .into_iter()
        .filter(|p| p.to_string_lossy().contains("rst"))
        .collect();
    assert!(!files.is_empty());
    for path in files {
        let img = parse_jpeg(&std::fs::read(&path).unwrap()).unwrap();
        assert!(img.restart_interval() > 0, "{}", path.display());
        let back = parse_jpeg(&serialize_jpeg(&img).unwrap()).unwrap();
        assert_eq!(back.restart_interval(), img.restart_interval());
    }
}

fn reference_luma(bytes: &[u8]) -> (usize, usize, Vec<u8>) {
    let options = DecoderOptions::default().jpeg_set_out_colorspace(ColorSpace::Luma);
    let mut decoder = JpegDecoder::new_with_options(ZCursor::new(bytes), options);
    let pixels = decoder.decode().unwrap();
    let (w, h) = decoder.dimensions().unwrap();
    (w, h, pixels)
}

#[test]
fn decoded_pixels_match_an_independent_decoder() {
    let mut files: Vec<_> = common::baseline_files();
    files.retain(|p| {
        let name = p.file_name().unwrap().to_string_lossy();
        !name.starts_with("color") && !name.starts_with("cv_color")
    });
    for path in files {
        let bytes = std::fs::read(&path).unwrap();
        let ours = decompress(&parse_jpeg(&bytes).unwrap());
        let (w, h, theirs) = reference_luma(&bytes);
        assert_eq!((ours.width, ours.height), (w, h), "{}", path.display());
        let worst = ours
            .samples
            .iter()
            .zip(&theirs)
            .map(|(&a, &b)| (i16::from(a) - i16::from(b)).abs())
            .max()
            .unwrap();
        // Integer versus floating-point IDCT.
        assert!(worst <= 1, "{}: max difference {worst}", path.display());
        let mean = ours
            .samples
            .iter()
            .zip(&theirs)
            .map(|(&a, &b)| f64::from((i16::from(a) - i16::from(b)).abs()))
            .sum::<f64>()
            / ours.samples.len() as f64;
        assert!(mean < 0.1, "{}: mean difference {mean}", path.display());
    }
}

#[test]
fn quality_estimate_recovers_encoder_setting() {
    for name in common::IMAGES {
        for q in common::QUALITIES {
            assert_eq!(estimate_quality(common::cover(name, q).luma_quant()), q);
        }
    }
    assert_eq!(scaled_luma_quant(50)[0], 16);
}

#[test]
fn own_encoder_output_is_readable_by_others() {
    let samples: Vec<u8> = (0..37 * 21).map(|i| ((i * 7) % 251) as u8).collect();
    let pixels = PixelImage::new(37, 21, samples).unwrap();
    let img = encode_grayscale(&pixels, 75).unwrap();
    let bytes = serialize_jpeg(&img).unwrap();
    let (w, h, theirs) = reference_luma(&bytes);
    assert_eq!((w, h), (37, 21));
    let ours = decompress(&parse_jpeg(&bytes).unwrap());
    assert!(ours
        .samples
        .iter()
        .zip(&theirs)
        .all(|(&a, &b)| (i16::from(a) - i16::from(b)).abs() <= 1));
}

#[test]
fn block_lengths_add_up_to_the_scan() {
    for q in common::QUALITIES {
        let img = common::cover("lena", q);
        let table = img.luma_ac_table();
        let total = scan_bits(&img).unwrap();
        let mut ac = 0u64;
        for b in 0..img.luma_block_count() {
            let len = ac_code_length(img.luma_block(b), table).unwrap();
            assert_eq!(len, common::ac_length_by_rule(img.luma_block(b), table));
            ac += u64::from(len);
        }
        // Changing a block's AC data changes the scan by exactly its length delta.
        let mut edited = img.clone();
        let b = img.luma_block_count() / 2;
        let before = ac_code_length(edited.luma_block(b), table).unwrap();
        for i in 1..64 {
            edited.luma_block_mut(b)[i] = 0;
        }
        let after = ac_code_length(edited.luma_block(b), table).unwrap();
        assert_eq!(
            scan_bits(&edited).unwrap() as i64 - total as i64,
            i64::from(after) - i64::from(before)
        );
        assert!(ac < total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_blocks_roundtrip(seed in any::<u64>(), quality in 10u8..=95) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (w, h) = (rng.gen_range(1..40), rng.gen_range(1..40));
        let samples = (0..w * h).map(|_| rng.gen()).collect();
        let img = encode_grayscale(&PixelImage::new(w, h, samples).unwrap(), quality).unwrap();
        let back = parse_jpeg(&serialize_jpeg(&img).unwrap()).unwrap();
        prop_assert!(img.same_coefficients(&back));
        for b in 0..img.luma_block_count() {
            prop_assert_eq!(
                ac_code_length(img.luma_block(b), img.luma_ac_table()).unwrap(),
                common::ac_length_by_rule(img.luma_block(b), img.luma_ac_table())
            );
        }
    }

    #[test]
    fn mutated_input_never_panics(flips in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..8)) {
        let mut bytes = std::fs::read(common::cover_path("lena", 50)).unwrap();
        for (at, value) in flips {
            let i = at.index(bytes.len());
            bytes[i] = value;
        }
        let _ = parse_jpeg(&bytes);
    }
}
