#include "wz/ring.hpp"

namespace wz {

std::string RingDescriptor::str() const {
  switch (kind) {
    case Kind::IntegersMod:
      return exponent == 1 ? "Zmod(" + std::to_string(p) + ")"
                           : "Zmod(" + std::to_string(p) + "^" + std::to_string(exponent) + ")";
    case Kind::PrimeField: return "Fp(" + std::to_string(p) + ")";
    case Kind::FiniteField: {
      std::string s = "Fq(" + std::to_string(p) + ",";
      s += poly ? to_string(*poly) : std::to_string(degree);
      if (var != "z") s += "," + var;
      return s + ")";
    }
    case Kind::TruncatedSeries:
      return "Series(" + base->str() + "," + var + "," + std::to_string(precision) + ")";
    case Kind::QuotientExtension: {
      std::string s = "Ext(" + base->str() + "," + var + "," + to_string(*poly);
      if (ideal_power > 0) s += "," + std::to_string(ideal_power);
      return s + ")";
    }
  }
  return "?";
}

DescPtr RingDescriptor::zmod(uint32_t p, int n) {
  auto d = std::make_shared<RingDescriptor>();
  d->kind = Kind::IntegersMod;
  d->p = p;
  d->exponent = n;
  return d;
}

DescPtr RingDescriptor::fp(uint32_t p) {
  auto d = std::make_shared<RingDescriptor>();
  d->kind = Kind::PrimeField;
  d->p = p;
  return d;
}

DescPtr RingDescriptor::fq(uint32_t p, int degree, const std::string& var) {
  auto d = std::make_shared<RingDescriptor>();
  d->kind = Kind::FiniteField;
  d->p = p;
  d->degree = degree;
  d->var = var;
  return d;
}

DescPtr RingDescriptor::fq_poly(uint32_t p, ExprPtr poly, const std::string& var) {
  auto d = std::make_shared<RingDescriptor>();
  d->kind = Kind::FiniteField;
  d->p = p;
  d->poly = std::move(poly);
  d->var = var;
  return d;
}

DescPtr RingDescriptor::series(DescPtr base, const std::string& var, int precision) {
  auto d = std::make_shared<RingDescriptor>();
  d->kind = Kind::TruncatedSeries;
  d->base = std::move(base);
  d->var = var;
  d->precision = precision;
  d->p = d->base->p;
  return d;
}

DescPtr RingDescriptor::ext(DescPtr base, const std::string& var, ExprPtr poly, int ideal_power) {
  auto d = std::make_shared<RingDescriptor>();
  d->kind = Kind::QuotientExtension;
  d->base = std::move(base);
  d->var = var;
  d->poly = std::move(poly);
  d->ideal_power = ideal_power;
  d->p = d->base->p;
  return d;
}

}  // namespace wz
