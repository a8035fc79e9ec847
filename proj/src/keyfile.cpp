#include "zkid/keyfile.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "zkid/errors.hpp"

namespace zkid {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string hex(const BigInt& x) { return "0x" + x.get_str(16); }

std::string point_text(const Point& p) {
  if (p.is_infinity()) return "infinity";
  return "(" + hex(p.x()) + ", " + hex(p.y()) + ")";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Writer {
 public:
  explicit Writer(ProtocolId id) { line("protocol", std::string(protocol_name(id))); }
  void line(const std::string& key, const std::string& value) { out_ << key << " = " << value << '\n'; }
  void num(const std::string& key, const BigInt& x) { line(key, hex(x)); }
  void point(const std::string& key, const Point& p) { line(key, point_text(p)); }
  void curve(const CurveParams& c) {
    num("curve_m", c.m);
    num("curve_a", c.a);
    num("curve_b", c.b);
  }
  void identity(const Bytes& id) { line("identity", std::string(id.begin(), id.end())); }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

class Fields {
 public:
  explicit Fields(std::string_view text) {
    std::size_t lineno = 0;
    while (!text.empty()) {
      const auto nl = text.find('\n');
      std::string_view raw = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      ++lineno;
      // The identity is free text, so only strip comments that start a line.
      const std::string_view line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw KeyFileError("line " + std::to_string(lineno) + ": expected `key = value`");
      }
      const std::string key(trim(line.substr(0, eq)));
      if (key.empty()) throw KeyFileError("line " + std::to_string(lineno) + ": empty key");
      if (!values_.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
        throw KeyFileError("duplicate key `" + key + "`");
      }
    }
  }

  const std::string& text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw KeyFileError("missing key `" + key + "`");
    return it->second;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  BigInt num(const std::string& key) const { return parse_num(key, text(key)); }

  Point point(const std::string& key, const CurveParams& curve) const {
    const std::string& v = text(key);
    Point p;
    if (v != "infinity") {
      if (v.size() < 2 || v.front() != '(' || v.back() != ')') {
        throw KeyFileError("key `" + key + "`: expected (0xX, 0xY) or infinity");
      }
      const std::string inner = v.substr(1, v.size() - 2);
      const auto comma = inner.find(',');
      if (comma == std::string::npos) throw KeyFileError("key `" + key + "`: missing comma");
      p = Point::affine(parse_num(key, std::string(trim(inner.substr(0, comma)))),
                        parse_num(key, std::string(trim(inner.substr(comma + 1)))));
    }
    if (!p.is_infinity() && (p.x() >= curve.m || p.y() >= curve.m || !on_curve(p, curve))) {
      throw KeyFileError("key `" + key + "`: point is not on the curve");
    }
    return p;
  }

  CurveParams curve(bool is_field) const {
    try {
      return CurveParams::make(num("curve_m"), num("curve_a"), num("curve_b"), is_field);
    } catch (const InvalidCurve& e) {
      throw KeyFileError(std::string("bad curve: ") + e.what());
    }
  }

  Bytes identity() const {
    const std::string& v = text("identity");
    return Bytes(v.begin(), v.end());
  }

  ProtocolId protocol() const {
    const auto id = parse_protocol_name(text("protocol"));
    if (!id) throw KeyFileError("unknown protocol `" + text("protocol") + "`");
    return *id;
  }

 private:
  static BigInt parse_num(const std::string& key, const std::string& v) {
    if (v.size() < 3 || v[0] != '0' || (v[1] != 'x' && v[1] != 'X')) {
      throw KeyFileError("key `" + key + "`: expected a 0x-prefixed hex integer");
    }
    BigInt x;
    if (x.set_str(v.substr(2), 16) != 0) {
      throw KeyFileError("key `" + key + "`: invalid hex digits");
    }
    return x;
  }

  std::map<std::string, std::string> values_;
};

void write_public_fields(Writer& w, const VerifierKey& key) {
  std::visit(Overloaded{
                 [&](const QrPublic& k) {
                   w.num("n", k.n);
                   w.num("b", k.b);
                   w.identity(k.identity);
                 },
                 [&](const FsPublic& k) {
                   w.num("n", k.n);
                   w.identity(k.identity);
                   w.line("k", std::to_string(k.v.size()));
                   for (std::size_t i = 0; i < k.v.size(); ++i) w.num("v" + std::to_string(i + 1), k.v[i]);
                 },
                 [&](const GqPublic& k) {
                   w.num("n", k.n);
                   w.num("v", k.v);
                   w.num("J", k.j);
                   w.identity(k.identity);
                 },
                 [&](const SchnorrPublic& k) {
                   w.num("p", k.group.p);
                   w.num("q", k.group.q);
                   w.num("g", k.group.g);
                   w.num("b", k.b);
                 },
                 [&](const EcSqrtPublic& k) {
                   w.curve(k.curve);
                   w.point("B", k.b);
                 },
                 [&](const EcDlogPublic& k) {
                   w.curve(k.curve);
                   w.point("G", k.g);
                   w.num("order", k.order);
                   w.point("B", k.b);
                 },
                 [&](const EcSchnorr2gPublic& k) {
                   w.curve(k.curve);
                   w.point("P1", k.p1);
                   w.point("P2", k.p2);
                   w.num("order", k.order);
                   w.point("V", k.v);
                 },
             },
             key);
}

VerifierKey read_public_fields(const Fields& f, ProtocolId id) {
  switch (id) {
    case ProtocolId::kQr:
      return QrPublic{f.num("n"), f.num("b"), f.identity()};
    case ProtocolId::kFs: {
      FsPublic k{f.num("n"), {}, f.identity()};
      const std::string& count = f.text("k");
      std::size_t kval = 0;
      try {
        kval = std::stoul(count);
      } catch (const std::exception&) {
        throw KeyFileError("key `k`: expected a decimal count");
      }
      if (kval < 1 || kval > 64) throw KeyFileError("key `k`: must be between 1 and 64");
      for (std::size_t i = 1; i <= kval; ++i) k.v.push_back(f.num("v" + std::to_string(i)));
      return k;
    }
    case ProtocolId::kGq:
      return GqPublic{f.num("n"), f.num("v"), f.num("J"), f.identity()};
    case ProtocolId::kSchnorr: {
      SchnorrPublic k{{f.num("p"), f.num("q"), f.num("g")}, f.num("b")};
      if (!validate_schnorr_group(k.group)) throw KeyFileError("invalid Schnorr group");
      return k;
    }
    case ProtocolId::kEcSqrt: {
      const CurveParams c = f.curve(false);
      return EcSqrtPublic{c, f.point("B", c)};
    }
    case ProtocolId::kEcDlog: {
      const CurveParams c = f.curve(true);
      return EcDlogPublic{c, f.point("G", c), f.num("order"), f.point("B", c)};
    }
    case ProtocolId::kEcSchnorr2g: {
      const CurveParams c = f.curve(true);
      return EcSchnorr2gPublic{c, f.point("P1", c), f.point("P2", c), f.num("order"), f.point("V", c)};
    }
  }
  throw KeyFileError("unknown protocol");
}

}  // namespace

std::string serialize_public(const VerifierKey& key) {
  Writer w(protocol_of(key));
  write_public_fields(w, key);
  return w.str();
}

std::string serialize_secret(const ProverKey& key) {
  Writer w(protocol_of(key));
  write_public_fields(w, public_part(key));
  std::visit(Overloaded{
                 [&](const QrSecret& k) { w.num("x", k.x); },
                 [&](const FsSecret& k) {
                   for (std::size_t i = 0; i < k.s.size(); ++i) w.num("s" + std::to_string(i + 1), k.s[i]);
                 },
                 [&](const GqSecret& k) { w.num("s", k.s); },
                 [&](const SchnorrSecret& k) { w.num("x", k.x); },
                 [&](const EcSqrtSecret& k) {
                   w.point("A", k.a);
                   w.num("p", k.p);
                   w.num("q", k.q);
                 },
                 [&](const EcDlogSecret& k) { w.num("m", k.m); },
                 [&](const EcSchnorr2gSecret& k) {
                   w.num("d1", k.d1);
                   w.num("d2", k.d2);
                 },
             },
             key);
  return w.str();
}

VerifierKey parse_public(std::string_view text) {
  const Fields f(text);
  return read_public_fields(f, f.protocol());
}

ProverKey parse_secret(std::string_view text) {
  const Fields f(text);
  const ProtocolId id = f.protocol();
  const VerifierKey pub = read_public_fields(f, id);
  ProverKey key = [&]() -> ProverKey {
    switch (id) {
      case ProtocolId::kQr:
        return QrSecret{std::get<QrPublic>(pub), f.num("x")};
      case ProtocolId::kFs: {
        FsSecret k{std::get<FsPublic>(pub), {}};
        for (std::size_t i = 1; i <= k.pub.v.size(); ++i) k.s.push_back(f.num("s" + std::to_string(i)));
        return k;
      }
      case ProtocolId::kGq:
        return GqSecret{std::get<GqPublic>(pub), f.num("s")};
      case ProtocolId::kSchnorr:
        return SchnorrSecret{std::get<SchnorrPublic>(pub), f.num("x")};
      case ProtocolId::kEcSqrt: {
        const auto& p = std::get<EcSqrtPublic>(pub);
        EcSqrtSecret k{p, f.point("A", p.curve), f.num("p"), f.num("q")};
        if (k.p * k.q != p.curve.m) throw KeyFileError("ring factors do not match the modulus");
        return k;
      }
      case ProtocolId::kEcDlog:
        return EcDlogSecret{std::get<EcDlogPublic>(pub), f.num("m")};
      case ProtocolId::kEcSchnorr2g:
        return EcSchnorr2gSecret{std::get<EcSchnorr2gPublic>(pub), f.num("d1"), f.num("d2")};
    }
    throw KeyFileError("unknown protocol");
  }();
  bool ok = false;
  try {
    ok = check_key_pair(key);
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) throw KeyFileError("secret does not match the public key");
  return key;
}

CurveParams parse_curve_file(std::string_view text) {
  const Fields f(text);
  return CurveParams::make(f.num("m"), f.num("a"), f.num("b"), true);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KeyFileError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw KeyFileError("cannot write " + path);
  out << text;
  if (!out) throw KeyFileError("write failed for " + path);
}

}  // namespace zkid
