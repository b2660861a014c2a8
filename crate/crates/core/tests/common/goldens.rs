//! Input/output examples for single rules, with the choices that select
//! the affected spans.

use hangul_obfus::engine::{Obfuscator, Variant};
use hangul_obfus::rules::iconological::{Angle, GlyphLevel};
use hangul_obfus::rules::phonological::LiaisonDirection;
use hangul_obfus::{segment, Rate, Scripted};

pub struct Golden {
    pub rule: u8,
    pub input: &'static str,
    pub expected: &'static str,
    pub variant: Variant,
    /// Eligible-site indices to rewrite; all of them when `None`.
    pub subset: Option<&'static [usize]>,
    pub picks: &'static [usize],
}

const NONE: Variant = Variant { direction: None, angle: None, level: None };

const fn g(rule: u8, input: &'static str, expected: &'static str) -> Golden {
    Golden { rule, input, expected, variant: NONE, subset: None, picks: &[] }
}

impl Golden {
    const fn sites(mut self, s: &'static [usize]) -> Self {
        self.subset = Some(s);
        self
    }

    const fn picks(mut self, p: &'static [usize]) -> Self {
        self.picks = p;
        self
    }

    const fn variant(mut self, v: Variant) -> Self {
        self.variant = v;
        self
    }

    pub fn run(&self, ob: &Obfuscator) -> Result<String, hangul_obfus::Error> {
        let mut c = Scripted::new().picks(self.picks.iter().copied());
        if let Some(s) = self.subset {
            c = c.subset_of(s.iter().copied());
        }
        let rule = ob.rule(self.rule)?.with_tau(Rate::ONE);
        Ok(ob.apply(&segment(self.input), rule, self.variant, &mut c)?.render())
    }
}

const FORWARD: Variant = Variant { direction: Some(LiaisonDirection::Forward), angle: None, level: None };
const REVERSE: Variant = Variant { direction: Some(LiaisonDirection::Reverse), angle: None, level: None };
const CHARACTER: Variant = Variant { direction: None, angle: None, level: Some(GlyphLevel::Character) };
const JAMO: Variant = Variant { direction: None, angle: None, level: Some(GlyphLevel::Subsyllabic) };
const QUARTER: Variant = Variant { direction: None, angle: Some(Angle::Quarter), level: None };
const HALF: Variant = Variant { direction: None, angle: Some(Angle::Half), level: None };

pub fn all() -> Vec<Golden> {
    vec![
        g(1, "한국인들만 알아볼 수", "한꾹인뜰만 알아뽈 쑤"),
        g(2, "태국", "타이국").sites(&[0]).picks(&[1]),
        g(2, "강해짐", "강하이짐").sites(&[1]).picks(&[1]),
        g(3, "낡았습니다", "낡앆슾니다"),
        g(3, "돈", "돉"),
        g(4, "할 짓이가", "할찌시가"),
        g(5, "안에", "안네").sites(&[1]),
        g(6, "거품 점수줘서", "궈퓸 졈슈줘숴").picks(&[1, 0, 0, 0, 1]),
        g(7, "호스트", "홋스트").sites(&[0]),
        g(7, "바깥", "박깥"),
        g(8, "들어봐", "드러봐").variant(FORWARD),
        g(8, "할아버지", "하라버지").variant(FORWARD),
        g(8, "바보", "밥오").variant(REVERSE),
        g(8, "버블", "법을").variant(REVERSE),
        g(9, "귀엽다", "커엽다"),
        g(9, "멍멍이", "댕댕이"),
        g(10, "쭈꾸미", "卒꾸미").variant(CHARACTER),
        g(10, "국밥", "弓밥").variant(CHARACTER),
        g(10, "야구", "OF구").variant(CHARACTER),
        g(10, "태평", "EH평").variant(CHARACTER),
        g(10, "참치", "え占치").variant(CHARACTER),
        g(10, "바꾸자", "㉳꾸자").variant(CHARACTER),
        g(10, "먼저", "먼久ㅓ").variant(JAMO).sites(&[1]),
        g(11, "비버", "뜨또").variant(QUARTER),
        g(11, "똥", "버0").variant(QUARTER),
        g(11, "눈물", "룸곡").variant(HALF),
        g(11, "아이폰", "궆I어ㅇ").variant(HALF),
        g(12, "망했다고", "mang했다고"),
        g(12, "게시판", "gㅔ시판").picks(&[0, 1]),
        g(13, "수상해", "水상해").sites(&[0]),
        g(13, "남한테", "男한테").sites(&[0]),
        g(14, "가지 말고 같이 먹자", "돈트 고 같이 먹자").sites(&[0]),
        g(14, "자리 좀 부탁해", "자리 좀 구다사이"),
        g(15, "화장실 더럽고 별로", "화장 실더럽 고별로").sites(&[1, 2, 4, 5]),
        g(16, "오랜만에 외국여행을", "오만랜에 외여국행을"),
        g(17, "돈을 쓰는 호갱", "돈을 °♡쓰는 《호‥갱》≥ㅅ≤").sites(&[2, 5, 6, 7]).picks(&[0, 1, 4, 2]),
    ]
}
