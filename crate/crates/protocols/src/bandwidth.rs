use crate::suite::{Family, ProtocolSuite};
use crate::{hybrid, lwe, lwr, rlwe};

/// Message sizes in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bandwidth {
    pub msg1: usize,
    pub msg2: usize,
}

impl Bandwidth {
    pub fn total(&self) -> usize {
        self.msg1 + self.msg2
    }
}

pub fn bandwidth(s: &ProtocolSuite) -> Bandwidth {
    let (msg1, msg2) = match s.family {
        Family::Lwr => (lwr::msg1_len(s), lwr::msg2_lens(s).iter().sum()),
        Family::Lwe => (lwe::msg1_len(s), lwe::msg2_lens(s).iter().sum()),
        Family::Hybrid => (hybrid::pk_len(s), hybrid::ct_lens(s).iter().sum()),
        Family::Rlwe => (rlwe::msg1_len(s), rlwe::msg2_lens(s).iter().sum()),
    };
    Bandwidth { msg1, msg2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite::suite_by_name;

    fn bw(name: &str) -> Bandwidth {
        bandwidth(suite_by_name(name).unwrap())
    }

    #[test]
    fn closed_forms() {
        assert_eq!(bw("lwr-recommended"), Bandwidth { msg1: 8192, msg2: 8224 });
        assert_eq!(bw("okcn-t2"), Bandwidth { msg1: 10000, msg2: 8608 });
        assert_eq!(bw("hybrid-recommended"), Bandwidth { msg1: 10592, msg2: 8608 });
        assert_eq!(bw("newhope").total(), 3872);
        assert_eq!(bw("akcn-4-1").total(), 3904);
        assert_eq!(bw("okcn-sec-837").total(), 4021);
        assert_eq!(bw("akcn-sec-765").total(), 4128);
        assert_eq!(bw("zarzar"), Bandwidth { msg1: 928, msg2: 1280 });
    }
}
