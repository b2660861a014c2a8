//! Synthetic Korean corpora for integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NEUTRAL: &[&str] = &[
    "오늘", "날씨가", "정말", "좋네요", "학교에", "가고", "싶어요", "친구랑", "같이", "밥을", "먹었어요",
    "한국인들만", "알아볼", "수", "있는", "문장", "들어봐", "할아버지", "댁에", "갔다", "호스트", "바깥",
    "게시판을", "확인하세요", "자리", "좀", "부탁해", "방이", "깨끗하다", "수상해", "남한테", "물어봐",
    "눈물이", "나요", "귀엽다", "쭈꾸미", "맛있어", "오랜만에", "외국여행을", "화장실", "별로", "돈을",
    "쓰는", "사람", "많이", "읽어", "주세요", "감사합니다", "내일", "다시", "만나요",
];

const TOXIC: &[&str] = &[
    "너", "진짜", "바보", "같다", "꺼져", "멍청한", "놈", "시험", "망했다고", "더럽고", "호갱",
    "짜증나", "한심해", "입", "닥쳐", "할", "짓이가", "가지", "말고", "미친", "거", "아냐", "쓰레기",
    "냄새", "나는", "인간", "제발", "사라져", "못생긴", "얼굴", "보기", "싫어", "꼴", "좋다", "웃기네",
];

fn sentence(rng: &mut ChaCha8Rng, vocab: &[&str], other: &[&str]) -> String {
    let n = rng.gen_range(3..=9);
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.8) {
                *vocab.choose(rng).unwrap()
            } else {
                *other.choose(rng).unwrap()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `n` neutral/toxic pairs, each side three to nine words.
pub fn pairs(n: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (sentence(&mut rng, NEUTRAL, TOXIC), sentence(&mut rng, TOXIC, NEUTRAL)))
        .collect()
}

/// A single random sentence.
pub fn text(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sentence(&mut rng, NEUTRAL, TOXIC)
}

pub fn write_tsv(path: &std::path::Path, pairs: &[(String, String)]) {
    let mut s = String::from("neutral\ttoxic\n");
    for (a, b) in pairs {
        s.push_str(&format!("{a}\t{b}\n"));
    }
    std::fs::write(path, s).unwrap();
}

pub mod goldens;
pub mod criteria;
