//! Self-describing binary dump: magic, version, structure kind, the text,
//! then the structure's parameters and word arrays, all little-endian u64.
//! Encoding is canonical, so identical builds produce identical bytes.

use crate::baseline::BaselineIndex;
use crate::bitpack::IntVec;
use crate::dc::DcStructure;
use crate::derand::PhiTuple;
use crate::det::{DetStructure, Node};
use crate::fp::PhiParams;
use crate::mc::{BitGeometry, McStructure};
use crate::nearby::NearbyStructure;
use crate::rmq::PackedRmq;
use crate::text::Text;
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"LCEDMP01";
const VERSION: u64 = 1;

/// A persisted structure together with the text it indexes.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    Baseline(BaselineIndex),
    Nearby(NearbyStructure),
    Det(DetStructure),
    Mc(McStructure),
    /// Monte Carlo structure whose function was certified collision-free.
    Lv { mc: McStructure, trials: u32 },
    Dc(DcStructure),
    Combined { mc: McStructure, dc: DcStructure },
    Derand { mc: McStructure, tuple: PhiTuple },
}

impl Structure {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Structure::Baseline(_) => "baseline",
            Structure::Nearby(_) => "nearby",
            Structure::Det(_) => "det",
            Structure::Mc(_) => "mc",
            Structure::Lv { .. } => "lv",
            Structure::Dc(_) => "dc",
            Structure::Combined { .. } => "combined",
            Structure::Derand { .. } => "derand",
        }
    }

    /// Machine words of persistent structure state (the text not included).
    pub fn stored_words(&self) -> usize {
        match self {
            Structure::Baseline(b) => b.stored_words(),
            Structure::Nearby(ns) => ns.stored_words(),
            Structure::Det(ds) => ds.stored_words(),
            Structure::Mc(ms) | Structure::Lv { mc: ms, .. } => ms.stored_words(),
            Structure::Dc(dc) => dc.stored_words(),
            Structure::Combined { mc, dc } => mc.stored_words() + dc.stored_words(),
            Structure::Derand { mc, tuple } => mc.stored_words() + 1 + tuple.xs.len(),
        }
    }

    fn kind_tag(&self) -> u64 {
        match self {
            Structure::Baseline(_) => 0,
            Structure::Nearby(_) => 1,
            Structure::Det(_) => 2,
            Structure::Mc(_) => 3,
            Structure::Lv { .. } => 4,
            Structure::Dc(_) => 5,
            Structure::Combined { .. } => 6,
            Structure::Derand { .. } => 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dump {
    pub text: Text,
    pub structure: Structure,
}

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn new() -> Self {
        Writer { buf: MAGIC.to_vec() }
    }

    fn u64(&mut self, x: u64) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }

    fn words(&mut self, xs: &[u64]) {
        self.u64(xs.len() as u64);
        for &x in xs {
            self.u64(x);
        }
    }

    fn intvec(&mut self, v: &IntVec) {
        self.u64(u64::from(v.width()));
        self.u64(v.len() as u64);
        self.words(v.words());
    }

    fn rmq(&mut self, r: &PackedRmq) {
        let (data, table) = r.parts();
        self.intvec(data);
        self.u64(table.len() as u64);
        for iv in table {
            self.intvec(iv);
        }
    }

    fn phi(&mut self, phi: &PhiParams) {
        self.u64(phi.p);
        self.u64(phi.x);
    }

    fn nearby(&mut self, ns: &NearbyStructure) {
        let (tau, n, periods, runs) = ns.parts();
        self.u64(tau as u64);
        self.u64(n as u64);
        self.u64(periods.len() as u64);
        for &p in periods {
            self.u64(u64::from(p));
        }
        self.words(runs);
    }

    fn mc(&mut self, ms: &McStructure) {
        let (geo, phis, values, exponents) = ms.parts();
        self.u64(geo.n() as u64);
        self.u64(geo.tau() as u64);
        self.u64(phis.len() as u64);
        for phi in phis {
            self.phi(phi);
        }
        for c in 0..phis.len() {
            self.words(&values[c]);
            self.words(&exponents[c]);
        }
    }

    fn dc(&mut self, dc: &DcStructure) {
        self.u64(dc.tau() as u64);
        self.u64(dc.n() as u64);
        for (rank_of, lcp) in dc.parts() {
            self.intvec(rank_of);
            self.rmq(lcp);
        }
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::MalformedDump(msg.into())
}

impl<'a> Reader<'a> {
    fn new(data: &'a [u8]) -> Result<Self> {
        if data.len() < 8 || &data[..8] != MAGIC {
            return Err(bad("missing magic"));
        }
        Ok(Reader { data, pos: 8 })
    }

    fn u64(&mut self) -> Result<u64> {
        let end = self.pos + 8;
        if end > self.data.len() {
            return Err(bad("truncated"));
        }
        let x = u64::from_le_bytes(self.data[self.pos..end].try_into().unwrap());
        self.pos = end;
        Ok(x)
    }

    fn count(&mut self) -> Result<usize> {
        let c = self.u64()? as usize;
        // every counted element is at least one word
        if c > (self.data.len() - self.pos) / 8 {
            return Err(bad(format!("implausible count {c}")));
        }
        Ok(c)
    }

    fn words(&mut self) -> Result<Vec<u64>> {
        let len = self.count()?;
        (0..len).map(|_| self.u64()).collect()
    }

    fn intvec(&mut self) -> Result<IntVec> {
        let width = self.u64()?;
        if width > 64 {
            return Err(bad(format!("word width {width} > 64")));
        }
        let len = self.u64()? as usize;
        let words = self.words()?;
        if words.len() != (len * width as usize).div_ceil(64) {
            return Err(bad("packed array length mismatch"));
        }
        Ok(IntVec::from_raw(words, width as u32, len))
    }

    fn rmq(&mut self) -> Result<PackedRmq> {
        let data = self.intvec()?;
        let levels = self.count()?;
        let table = (0..levels).map(|_| self.intvec()).collect::<Result<Vec<_>>>()?;
        Ok(PackedRmq::from_parts(data, table))
    }

    fn phi(&mut self) -> Result<PhiParams> {
        let p = self.u64()?;
        let x = self.u64()?;
        PhiParams::new(p, x).map_err(|e| bad(format!("bad fingerprint params: {e}")))
    }

    fn nearby(&mut self) -> Result<NearbyStructure> {
        let tau = self.u64()? as usize;
        let n = self.u64()? as usize;
        let len = self.count()?;
        let periods = (0..len)
            .map(|_| {
                let p = self.u64()?;
                u32::try_from(p).map_err(|_| bad(format!("period {p} overflows")))
            })
            .collect::<Result<Vec<_>>>()?;
        let runs = self.words()?;
        if runs.len() != periods.len() {
            return Err(bad("period/run length mismatch"));
        }
        Ok(NearbyStructure::from_parts(tau, n, periods, runs))
    }

    fn mc(&mut self) -> Result<McStructure> {
        let n = self.u64()? as usize;
        let tau = self.u64()? as usize;
        let geo = BitGeometry::new(n, tau).map_err(|e| bad(format!("bad geometry: {e}")))?;
        let k = self.count()?;
        if k == 0 {
            return Err(bad("empty fingerprint tuple"));
        }
        let phis = (0..k).map(|_| self.phi()).collect::<Result<Vec<_>>>()?;
        let mut values = Vec::with_capacity(k);
        let mut exponents = Vec::with_capacity(k);
        for _ in 0..k {
            values.push(self.words()?);
            exponents.push(self.words()?);
        }
        let m = values[0].len();
        if values.iter().chain(&exponents).any(|v| v.len() != m) {
            return Err(bad("sample array length mismatch"));
        }
        Ok(McStructure::from_parts(geo, phis, values, exponents))
    }

    fn dc(&mut self) -> Result<DcStructure> {
        let tau = self.u64()? as usize;
        let n = self.u64()? as usize;
        let fwd = (self.intvec()?, self.rmq()?);
        let rev = (self.intvec()?, self.rmq()?);
        Ok(DcStructure::from_parts(tau, n, fwd, rev))
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(bad(format!("{} trailing bytes", self.data.len() - self.pos)));
        }
        Ok(())
    }
}

impl Dump {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.u64(VERSION);
        w.u64(self.structure.kind_tag());
        w.words(self.text.symbols());
        match &self.structure {
            // rebuilt deterministically from the embedded text on load
            Structure::Baseline(_) => {}
            Structure::Nearby(ns) => w.nearby(ns),
            Structure::Det(ds) => {
                w.u64(ds.tau() as u64);
                w.u64(self.text.len() as u64);
                let nodes = ds.nodes();
                w.u64(nodes.len() as u64);
                for nd in nodes {
                    w.u64(u64::from(nd.lo));
                    w.u64(u64::from(nd.hi));
                    w.u64(u64::from(nd.left));
                    w.u64(u64::from(nd.right));
                    w.u64(nd.partners.len() as u64);
                    for &p in &nd.partners {
                        w.u64(u64::from(p));
                    }
                    for &l in &nd.lces {
                        w.u64(l);
                    }
                }
                w.nearby(ds.nearby());
            }
            Structure::Mc(ms) => w.mc(ms),
            Structure::Lv { mc, trials } => {
                w.mc(mc);
                w.u64(u64::from(*trials));
            }
            Structure::Dc(dc) => w.dc(dc),
            Structure::Combined { mc, dc } => {
                w.mc(mc);
                w.dc(dc);
            }
            Structure::Derand { mc, tuple } => {
                w.mc(mc);
                w.u64(tuple.p);
                w.words(&tuple.xs);
                w.u64(tuple.eps.to_bits());
            }
        }
        w.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Dump> {
        let mut r = Reader::new(bytes)?;
        let version = r.u64()?;
        if version != VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        let kind = r.u64()?;
        let symbols = r.words()?;
        let text = Text::new(symbols)?;
        let structure = match kind {
            0 => Structure::Baseline(BaselineIndex::build(&text)),
            1 => Structure::Nearby(r.nearby()?),
            2 => {
                let tau = r.u64()? as usize;
                let n = r.u64()? as usize;
                if n != text.len() {
                    return Err(bad("structure length disagrees with text"));
                }
                let count = r.count()?;
                let mut nodes = Vec::with_capacity(count);
                for _ in 0..count {
                    let lo = r.u64()? as u32;
                    let hi = r.u64()? as u32;
                    let left = r.u64()? as u32;
                    let right = r.u64()? as u32;
                    let k = r.count()?;
                    let partners =
                        (0..k).map(|_| Ok(r.u64()? as u32)).collect::<Result<Vec<_>>>()?;
                    let lces = (0..k).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
                    nodes.push(Node { lo, hi, left, right, partners, lces });
                }
                Structure::Det(DetStructure::from_parts(tau, n, nodes, r.nearby()?))
            }
            3 => Structure::Mc(r.mc()?),
            4 => {
                let mc = r.mc()?;
                let trials = u32::try_from(r.u64()?).map_err(|_| bad("trial count overflows"))?;
                Structure::Lv { mc, trials }
            }
            5 => Structure::Dc(r.dc()?),
            6 => Structure::Combined { mc: r.mc()?, dc: r.dc()? },
            7 => {
                let mc = r.mc()?;
                let p = r.u64()?;
                let xs = r.words()?;
                let eps = f64::from_bits(r.u64()?);
                Structure::Derand { mc, tuple: PhiTuple { p, xs, eps } }
            }
            other => return Err(bad(format!("unknown structure kind {other}"))),
        };
        r.finish()?;
        Ok(Dump { text, structure })
    }
}
