//! Serde adapters: exact rationals travel as `{"num": "..", "den": ".."}`
//! with decimal strings so no precision is lost.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(q: &BigRational) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<BigRational, String> {
        let num: BigInt = self.num.parse().map_err(|_| format!("bad numerator {:?}", self.num))?;
        let den: BigInt = self
            .den
            .parse()
            .map_err(|_| format!("bad denominator {:?}", self.den))?;
        if den == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(num, den))
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RationalJson::from(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        RationalJson::deserialize(d)?.to_rational().map_err(D::Error::custom)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(RationalJson::from))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<RationalJson>::deserialize(d)?
            .iter()
            .map(|r| r.to_rational().map_err(D::Error::custom))
            .collect()
    }
}

pub mod opt_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(RationalJson::from)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
        Option::<Vec<RationalJson>>::deserialize(d)?
            .map(|v| v.iter().map(|r| r.to_rational().map_err(D::Error::custom)).collect())
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "rational")]
        x: BigRational,
        #[serde(with = "opt_rational_vec")]
        v: Option<Vec<BigRational>>,
    }

    #[test]
    fn round_trip() {
        let h = Holder {
            x: BigRational::new((-3).into(), 6.into()),
            v: Some(vec![BigRational::from_integer(7.into())]),
        };
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"x":{"num":"-1","den":"2"},"v":[{"num":"7","den":"1"}]}"#);
        assert_eq!(serde_json::from_str::<Holder>(&text).unwrap(), h);
        let bad = r#"{"x":{"num":"1","den":"0"},"v":null}"#;
        assert!(serde_json::from_str::<Holder>(bad).is_err());
    }
}
