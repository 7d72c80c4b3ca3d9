//! Serialization: every number crosses the wire as an exact string ("p/q" or
//! "a + b*sqrt(d)"), never as a float, so round-trips are lossless.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::conic::{Conic, LinFracMap, ProjPoint};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::exact::{format_rat, parse_rat, QuadExt, Rat};
use crate::progression::ApTriple;

fn rat_to_string(r: &Rat) -> String {
    format_rat(r)
}

fn rat_from_string<E: DeError>(s: &str) -> Result<Rat, E> {
    parse_rat(s).map_err(|e| E::custom(format!("bad rational {s:?}: {e}")))
}

fn quad_from_string<E: DeError>(s: &str) -> Result<QuadExt, E> {
    s.parse()
        .map_err(|e| E::custom(format!("bad field element {s:?}: {e}")))
}

#[derive(Serialize, Deserialize)]
struct ConicDto {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
    #[serde(rename = "D")]
    d: String,
    #[serde(rename = "E")]
    e: String,
    #[serde(rename = "F")]
    f: String,
}

impl Serialize for Conic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConicDto {
            a: rat_to_string(&self.a),
            b: rat_to_string(&self.b),
            c: rat_to_string(&self.c),
            d: rat_to_string(&self.d),
            e: rat_to_string(&self.e),
            f: rat_to_string(&self.f),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Conic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dto = ConicDto::deserialize(d)?;
        Conic::new(
            rat_from_string(&dto.a)?,
            rat_from_string(&dto.b)?,
            rat_from_string(&dto.c)?,
            rat_from_string(&dto.d)?,
            rat_from_string(&dto.e)?,
            rat_from_string(&dto.f)?,
        )
        .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct LinFracMapDto {
    a: String,
    b: String,
    c: String,
    d: String,
    e: String,
    f: String,
}

impl Serialize for LinFracMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LinFracMapDto {
            a: rat_to_string(&self.a),
            b: rat_to_string(&self.b),
            c: rat_to_string(&self.c),
            d: rat_to_string(&self.d),
            e: rat_to_string(&self.e),
            f: rat_to_string(&self.f),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinFracMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dto = LinFracMapDto::deserialize(d)?;
        LinFracMap::new(
            rat_from_string(&dto.a)?,
            rat_from_string(&dto.b)?,
            rat_from_string(&dto.c)?,
            rat_from_string(&dto.d)?,
            rat_from_string(&dto.e)?,
            rat_from_string(&dto.f)?,
        )
        .map_err(D::Error::custom)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [
            self.x1.to_string(),
            self.x2.to_string(),
            self.x0.to_string(),
        ]
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x1, x2, x0] = <[String; 3]>::deserialize(d)?;
        ProjPoint::new(
            quad_from_string(&x1)?,
            quad_from_string(&x2)?,
            quad_from_string(&x0)?,
        )
        .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct WeierstrassDto {
    a1: String,
    a2: String,
    a3: String,
    a4: String,
    a6: String,
}

impl Serialize for WeierstrassCurve {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeierstrassDto {
            a1: rat_to_string(&self.a1),
            a2: rat_to_string(&self.a2),
            a3: rat_to_string(&self.a3),
            a4: rat_to_string(&self.a4),
            a6: rat_to_string(&self.a6),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeierstrassCurve {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dto = WeierstrassDto::deserialize(d)?;
        Ok(WeierstrassCurve::new(
            rat_from_string(&dto.a1)?,
            rat_from_string(&dto.a2)?,
            rat_from_string(&dto.a3)?,
            rat_from_string(&dto.a4)?,
            rat_from_string(&dto.a6)?,
        ))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CurvePointDto {
    Infinity {
        inf: bool,
    },
    Affine {
        #[serde(rename = "X")]
        x: String,
        #[serde(rename = "Y")]
        y: String,
    },
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Infinity => CurvePointDto::Infinity { inf: true }.serialize(s),
            CurvePoint::Affine(x, y) => CurvePointDto::Affine {
                x: rat_to_string(x),
                y: rat_to_string(y),
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match CurvePointDto::deserialize(d)? {
            CurvePointDto::Infinity { inf: true } => Ok(CurvePoint::Infinity),
            CurvePointDto::Infinity { inf: false } => {
                Err(D::Error::custom("\"inf\" must be true when present"))
            }
            CurvePointDto::Affine { x, y } => Ok(CurvePoint::Affine(
                rat_from_string(&x)?,
                rat_from_string(&y)?,
            )),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ApTripleDto {
    delta: String,
    t: [String; 3],
    points: [ProjPoint; 3],
}

impl Serialize for ApTriple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ApTripleDto {
            delta: rat_to_string(&self.delta),
            t: [
                rat_to_string(&self.t_values[0]),
                rat_to_string(&self.t_values[1]),
                rat_to_string(&self.t_values[2]),
            ],
            points: self.points.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ApTriple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dto = ApTripleDto::deserialize(d)?;
        Ok(ApTriple {
            delta: rat_from_string(&dto.delta)?,
            t_values: [
                rat_from_string(&dto.t[0])?,
                rat_from_string(&dto.t[1])?,
                rat_from_string(&dto.t[2])?,
            ],
            points: dto.points,
        })
    }
}
