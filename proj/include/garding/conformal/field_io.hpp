#pragma once

// Field files: an 8-byte little-endian header length, a JSON header
// {schema, name, n, shape, lengths, dtype}, then the values as
// little-endian float64 in grid order.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <string>

#include "garding/conformal/grid.hpp"

namespace garding {

struct NamedField {
  std::string name;
  GridField field;
};

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

inline std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw DomainError("field file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline nlohmann::json field_header(const GridField& f, const std::string& name) {
  return {{"schema", 1},
          {"name", name},
          {"n", f.grid().n()},
          {"shape", f.grid().shape()},
          {"lengths", f.grid().lengths()},
          {"dtype", "f64le"}};
}

inline void write_field(std::ostream& os, const GridField& f, const std::string& name) {
  const std::string header = field_header(f, name).dump();
  detail::put_u64(os, header.size());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (double v : f.values()) detail::put_u64(os, std::bit_cast<std::uint64_t>(v));
  if (!os) throw DomainError("could not write field data");
}

inline void write_field(const std::string& path, const GridField& f, const std::string& name) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open " + path + " for writing");
  write_field(os, f, name);
}

inline NamedField read_field(std::istream& is) {
  const std::uint64_t len = detail::get_u64(is);
  if (len > (1u << 20)) throw DomainError("field header too long");
  std::string text(len, '\0');
  if (!is.read(text.data(), static_cast<std::streamsize>(len))) throw DomainError("field file truncated in header");
  int n = 0;
  std::vector<int> shape;
  std::vector<double> lengths;
  std::string name;
  try {
    const auto h = nlohmann::json::parse(text);
    if (h.at("schema").get<int>() != 1) throw DomainError("unsupported field schema");
    if (h.at("dtype").get<std::string>() != "f64le") throw DomainError("unsupported field dtype");
    n = h.at("n").get<int>();
    shape = h.at("shape").get<std::vector<int>>();
    lengths = h.at("lengths").get<std::vector<double>>();
    name = h.value("name", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed field header: ") + e.what());
  }
  PeriodicGrid grid(n, std::move(shape), std::move(lengths));
  std::vector<double> values(grid.size());
  for (auto& v : values) v = std::bit_cast<double>(detail::get_u64(is));
  return {std::move(name), GridField(grid, std::move(values))};
}

inline NamedField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot open " + path);
  return read_field(is);
}

}  // namespace garding
