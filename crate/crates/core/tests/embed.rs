mod common;

use jpeg_rdh::cli::random_payload;
use jpeg_rdh::cost::Signal;
use jpeg_rdh::embed::{
    bits_to_bytes, bytes_to_bits, extract, hs_embed_block, hs_extract_block, max_payload,
    plan_and_embed, AuxRecord, EmbedOptions, Strategy, HEADER_BITS,
};
use jpeg_rdh::error::Error;
use jpeg_rdh::jpeg::{parse_jpeg, serialize_jpeg, CoefficientImage};
use proptest::prelude::*;

const STRATEGIES: [Strategy; 3] = [Strategy::MultiObjective, Strategy::Huang, Strategy::Hou];

fn options(strategy: Strategy) -> EmbedOptions {
    EmbedOptions {
        strategy,
        ..EmbedOptions::default()
    }
}

fn roundtrip(cover: &CoefficientImage, payload: &[bool], strategy: Strategy) -> CoefficientImage {
    let out = plan_and_embed(cover, payload, &options(strategy)).unwrap();
    // Through the file format, as a receiver would see it.
    let stego = parse_jpeg(&serialize_jpeg(&out.stego).unwrap()).unwrap();
    let (got, restored) = extract(&stego).unwrap();
    assert_eq!(got, payload);
    assert!(restored.same_coefficients(cover));
    assert_eq!(
        serialize_jpeg(&restored).unwrap(),
        serialize_jpeg(cover).unwrap()
    );
    out.stego
}

#[test]
fn payloads_come_back_exactly() {
    for (name, q) in [("lena", 50), ("baboon", 30), ("cameraman", 90)] {
        let cover = common::cover(name, q);
        for strategy in STRATEGIES {
            let max = max_payload(&cover, &options(strategy)).unwrap();
            for bits in [0, 1, 777, max / 2] {
                roundtrip(&cover, &random_payload(bits, bits + 3), strategy);
            }
        }
    }
}

#[test]
fn full_capacity_is_reachable_and_one_more_bit_is_not() {
    let cover = common::cover("aerial", 70);
    for strategy in STRATEGIES {
        let max = max_payload(&cover, &options(strategy)).unwrap();
        let total: u64 = (0..cover.luma_block_count())
            .map(|b| u64::from(jpeg_rdh::cost::capacity(cover.luma_block(b))))
            .sum();
        assert!(
            max > total * 9 / 10,
            "{}: {max} of {total}",
            strategy.name()
        );
        roundtrip(&cover, &random_payload(max, 11), strategy);
        let over = plan_and_embed(&cover, &random_payload(max + 1, 11), &options(strategy));
        assert!(
            matches!(over, Err(Error::InsufficientCapacity { .. })),
            "{}",
            strategy.name()
        );
    }
}

#[test]
fn plan_describes_the_stego_image() {
    let cover = common::cover("lena", 70);
    let payload = random_payload(4000, 5);
    let out = plan_and_embed(&cover, &payload, &EmbedOptions::default()).unwrap();
    let plan = &out.plan;
    assert!(plan.decision.capacity >= plan.required_bits);
    assert_eq!(plan.required_bits, 4000 + plan.aux_bits as u64);
    assert!(plan.decision.bits[plan.tail_start..].iter().all(|&b| !b));
    let changed = (0..cover.luma_block_count())
        .filter(|&b| cover.luma_block(b) != out.stego.luma_block(b))
        .count();
    // Selected blocks plus the blocks whose LSBs hold the record.
    assert!(changed <= plan.decision.count() + (cover.luma_block_count() - plan.tail_start));
    for b in 0..cover.luma_block_count() {
        assert_eq!(
            cover.luma_block(b)[0],
            out.stego.luma_block(b)[0],
            "DC of block {b}"
        );
    }
}

#[test]
fn embedding_is_deterministic() {
    let cover = common::cover("baboon", 50);
    let payload = random_payload(3000, 9);
    for strategy in STRATEGIES {
        let a = plan_and_embed(&cover, &payload, &options(strategy)).unwrap();
        let b = plan_and_embed(&cover, &payload, &options(strategy)).unwrap();
        assert_eq!(
            serialize_jpeg(&a.stego).unwrap(),
            serialize_jpeg(&b.stego).unwrap()
        );
    }
}

#[test]
fn plain_covers_are_not_mistaken_for_stego() {
    for name in common::IMAGES {
        let err = extract(&common::cover(name, 50)).unwrap_err();
        assert!(
            matches!(err, Error::AuxDecode(_) | Error::TruncatedStego),
            "{name}: {err}"
        );
    }
}

#[test]
fn tampering_is_detected_or_harmless() {
    let cover = common::cover("lena", 50);
    let payload = random_payload(2000, 1);
    let stego = plan_and_embed(&cover, &payload, &EmbedOptions::default())
        .unwrap()
        .stego;
    // Flip the LSB of the last record slot's coefficient in each of the last blocks.
    let n = stego.luma_block_count();
    let mut detected = 0;
    for b in (n - 40..n).rev() {
        let Some(pos) = (1..64).rev().find(|&p| stego.luma_block(b)[p].abs() >= 2) else {
            continue;
        };
        let mut bad = stego.clone();
        let v = bad.luma_block(b)[pos];
        bad.luma_block_mut(b)[pos] = v.signum() * (v.abs() ^ 1);
        match extract(&bad) {
            Err(Error::AuxDecode(_) | Error::TruncatedStego) => detected += 1,
            Err(e) => panic!("unexpected error {e}"),
            Ok((got, _)) => assert_ne!(got.len(), 0),
        }
    }
    assert!(detected > 0);
    // Cutting the image short loses the record entirely.
    let mut cut = stego.clone();
    for b in 0..n {
        *cut.luma_block_mut(b) = [0; 64];
    }
    assert!(matches!(
        extract(&cut),
        Err(Error::AuxDecode(_) | Error::TruncatedStego)
    ));
}

#[test]
fn oversized_coefficients_are_left_out() {
    let mut cover = common::cover("cameraman", 90);
    cover.luma_block_mut(5)[3] = 1023;
    cover.luma_block_mut(5)[4] = 1;
    let payload = random_payload(5000, 2);
    for strategy in STRATEGIES {
        let out = plan_and_embed(&cover, &payload, &options(strategy)).unwrap();
        assert!(!out.plan.decision.bits[5]);
        let (got, restored) = extract(&out.stego).unwrap();
        assert_eq!(got, payload);
        assert!(restored.same_coefficients(&cover));
    }
}

#[test]
fn tiny_images_report_their_limits() {
    let pixels = jpeg_rdh::transform::PixelImage::filled(8, 8, 200);
    let img = jpeg_rdh::jpeg::encode_grayscale(&pixels, 50).unwrap();
    // A flat block has no slots for the record.
    assert!(matches!(
        plan_and_embed(&img, &[true], &EmbedOptions::default()),
        Err(Error::InsufficientAuxCapacity { .. } | Error::InsufficientCapacity { .. })
    ));
}

#[test]
fn byte_packing() {
    assert_eq!(
        bytes_to_bits(&[0b1010_0001]),
        vec![true, false, true, false, false, false, false, true]
    );
    assert_eq!(bits_to_bytes(&[true, true]), vec![0b1100_0000]);
    assert_eq!(bits_to_bytes(&bytes_to_bits(b"hello")), b"hello");
    assert!(bits_to_bytes(&[]).is_empty());
}

#[test]
fn record_layout() {
    let v = [false, true, true, false];
    let rec = AuxRecord::build(&v, 9).unwrap();
    assert!(!rec.rle);
    let bits = rec.to_bits();
    assert_eq!(bits.len(), HEADER_BITS + 4);
    assert_eq!(&bits[28..32], &[true, false, false, true]);
    assert_eq!(&bits[61..64], &[true, false, false]);
    assert_eq!(&bits[65..], &v);

    let long: Vec<bool> = (0..70_000).map(|i| i >= 100).collect();
    let rec = AuxRecord::build(&long, 0).unwrap();
    assert!(rec.rle);
    // 100 zeros, 65535 ones, an empty zero run, the remaining 4365 ones.
    assert_eq!(rec.bit_len(), HEADER_BITS + 4 * 16);
    let back = AuxRecord::read(&mut rec.to_bits().into_iter(), long.len()).unwrap();
    assert_eq!(back, rec);
    assert!(matches!(
        AuxRecord::read(&mut rec.to_bits().into_iter(), 5),
        Err(Error::AuxDecode(_))
    ));
    assert!(matches!(
        AuxRecord::read(&mut rec.to_bits()[..70].iter().copied(), long.len()),
        Err(Error::TruncatedStego)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn records_roundtrip(v in prop::collection::vec(prop::bool::weighted(0.1), 1..3000), payload_bits in any::<u32>()) {
        let rec = AuxRecord::build(&v, payload_bits).unwrap();
        let bits = rec.to_bits();
        prop_assert_eq!(bits.len(), rec.bit_len());
        prop_assert!(rec.bit_len() <= HEADER_BITS + v.len());
        let back = AuxRecord::read(&mut bits.into_iter(), v.len()).unwrap();
        prop_assert_eq!(back, rec);
    }

    #[test]
    fn block_shift_inverts(coeffs in prop::array::uniform32(-5i16..=5), tail in prop::array::uniform32(-300i16..=300), seed in any::<u64>()) {
        let mut block = [0i16; 64];
        block[..32].copy_from_slice(&coeffs);
        block[32..].copy_from_slice(&tail);
        let s = Signal { index: 0, coeffs: block, quant_table_ref: 0 };
        let r = jpeg_rdh::cost::capacity(&block) as usize;
        let bits = random_payload(r as u64 + 3, seed);
        let (marked, used) = hs_embed_block(&s, &bits).unwrap();
        prop_assert_eq!(used, r);
        let (got, back) = hs_extract_block(&marked);
        prop_assert_eq!(&got[..], &bits[..r]);
        prop_assert_eq!(back.coeffs, block);
        if r > 0 {
            let short = hs_embed_block(&s, &bits[..r - 1]);
            let is_short = matches!(short, Err(Error::ShortStream { .. }));
            prop_assert!(is_short);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_images_roundtrip(seed in any::<u64>(), quality in 20u8..=95, strategy in 0usize..3) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (w, h) = (rng.gen_range(64..160), rng.gen_range(64..160));
        // Smooth gradient with noise so blocks carry some ±1 values.
        let samples = (0..w * h).map(|i| ((i % w + i / w) as u32 / 2 + rng.gen_range(0..24)).min(255) as u8).collect();
        let cover = jpeg_rdh::jpeg::encode_grayscale(&jpeg_rdh::transform::PixelImage::new(w, h, samples).unwrap(), quality).unwrap();
        let strategy = STRATEGIES[strategy];
        let Ok(max) = max_payload(&cover, &options(strategy)) else { return Ok(()) };
        let bits = rng.gen_range(0..=max);
        roundtrip(&cover, &random_payload(bits, seed), strategy);
    }
}
