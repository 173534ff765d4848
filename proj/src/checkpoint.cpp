#include "hxnn/error.hpp"
#include "hxnn/hmlp.hpp"
#include "hxnn/zoo.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace hxnn {

namespace {

constexpr std::string_view kMagic = "hxnn-model v1";

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

void write_tensor(std::ostringstream& out, std::string_view key,
                  const std::vector<double>& values) {
  out << key << ':';
  for (double v : values) out << ' ' << hex(v);
  out << '\n';
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = eol + 1;
  }
  return lines;
}

std::pair<std::string, std::string> key_value(const std::string& line,
                                              std::size_t line_no) {
  const auto colon = line.find(':');
  if (colon == std::string::npos) {
    throw ParseError(line_no, "expected 'key: value'");
  }
  std::string value = line.substr(colon + 1);
  const auto b = value.find_first_not_of(' ');
  value = b == std::string::npos ? std::string() : value.substr(b);
  return {line.substr(0, colon), value};
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line_no, "expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

std::vector<double> parse_tensor(const std::string& s, std::size_t expected,
                                 std::size_t line_no) {
  std::vector<double> out;
  out.reserve(expected);
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || errno == ERANGE) {
      throw ParseError(line_no, "malformed coefficient '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.size() != expected) {
    throw ParseError(line_no, "expected " + std::to_string(expected) +
                                  " coefficients, got " +
                                  std::to_string(out.size()));
  }
  return out;
}

}  // namespace

std::string save_checkpoint(const HMLPParams& params) {
  std::ostringstream out;
  out << kMagic << '\n';
  const Algebra& alg = params.algebra();
  bool by_name = false;
  if (zoo::is_zoo_name(alg.name())) {
    by_name = zoo::resolve(alg.name()).constants() == alg.constants();
  }
  if (by_name) {
    out << "algebra: " << alg.name() << '\n';
  } else {
    const auto spec = lines_of(serialize_algebra(alg));
    out << "algebra-inline: " << spec.size() << '\n';
    for (const auto& l : spec) out << l << '\n';
  }
  out << "N: " << params.inputs() << '\n';
  out << "M: " << params.hidden() << '\n';
  out << "activation: " << to_string(params.activation().kind) << '\n';
  out << "seed: " << params.seed << '\n';
  write_tensor(out, "hidden_weights", params.hidden_weights);
  write_tensor(out, "hidden_biases", params.hidden_biases);
  write_tensor(out, "output_weights", params.output_weights);
  return out.str();
}

HMLPParams load_checkpoint(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kMagic) {
    throw ParseError(1, "not an hxnn model (expected '" + std::string(kMagic) + "')");
  }
  std::size_t at = 1;
  auto next = [&](std::string_view want) {
    if (at >= lines.size()) {
      throw ParseError(at + 1, "unexpected end of model, expected '" +
                                   std::string(want) + "'");
    }
    auto kv = key_value(lines[at], at + 1);
    ++at;
    return kv;
  };

  Algebra alg;
  {
    auto [key, value] = next("algebra");
    if (key == "algebra") {
      try {
        alg = zoo::resolve(value);
      } catch (const Error& e) {
        throw ParseError(at, e.what());
      }
    } else if (key == "algebra-inline") {
      const std::size_t count = parse_u64(value, at);
      if (at + count > lines.size()) {
        throw ParseError(at, "inline algebra runs past the end of the model");
      }
      std::string spec;
      for (std::size_t k = 0; k < count; ++k) spec += lines[at + k] + '\n';
      try {
        alg = parse_algebra(spec);
      } catch (const ParseError& e) {
        throw ParseError(at + (e.line() ? e.line() : 1), e.what());
      }
      at += count;
    } else {
      throw ParseError(at, "expected 'algebra:' or 'algebra-inline:'");
    }
  }

  auto expect = [&](std::string_view want) {
    auto [key, value] = next(want);
    if (key != want) {
      throw ParseError(at, "expected '" + std::string(want) + ":', got '" + key + "'");
    }
    return value;
  };

  const std::size_t inputs = parse_u64(expect("N"), at);
  const std::size_t hidden = parse_u64(expect("M"), at);
  SplitActivation act;
  try {
    act.kind = parse_activation(expect("activation"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(at, e.what());
  }
  const std::uint64_t seed = parse_u64(expect("seed"), at);

  HMLPParams p;
  try {
    p = HMLPParams(alg, inputs, hidden, act);
  } catch (const Error& e) {
    throw ParseError(at, e.what());
  }
  p.seed = seed;
  p.hidden_weights = parse_tensor(expect("hidden_weights"), p.hidden_weights.size(), at);
  p.hidden_biases = parse_tensor(expect("hidden_biases"), p.hidden_biases.size(), at);
  p.output_weights = parse_tensor(expect("output_weights"), p.output_weights.size(), at);
  for (; at < lines.size(); ++at) {
    if (!lines[at].empty()) throw ParseError(at + 1, "trailing content in model");
  }
  return p;
}

}  // namespace hxnn
