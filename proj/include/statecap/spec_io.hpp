#pragma once
// Channel-spec file format shared by all channel kinds: a JSON document with
// fields
//   kind       : "single" | "mac" | "bc" | "relay"
//   alphabets  : named sizes (X,S,Y / X1,X2,S1,S2,Y or Y1+Y2 / X,S,Y1,Y2 /
//                X,XR,S or S1+S2,YR,Y), each between 1 and 6
//   state_pmf  : flat array, row-major over the declared state coordinates
//   transition : nested arrays, one level per input/state coordinate in the
//                documented order, innermost = output (output pairs keep the
//                first output outermost)
//   header     : optional free-text description of the index order
// Rows must sum to 1 within 1e-6 or loading fails; rows are renormalized
// exactly after that check.

#include <fstream>
#include <sstream>
#include <variant>

#include "json.hpp"

#include "statecap/channels.hpp"

namespace statecap {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using AnyChannel = std::variant<StateChannel, MacStateChannel, BcStateChannel, RelayStateChannel>;

namespace spec_detail {

using nlohmann::json;

constexpr int kMaxAlphabet = 6;

inline int get_size(const json& alph, const std::string& name) {
  if (!alph.contains(name)) throw SpecError("alphabets: missing " + name);
  int v = alph.at(name).get<int>();
  if (v < 1 || v > kMaxAlphabet)
    throw SpecError("alphabets: " + name + " must be in [1," + std::to_string(kMaxAlphabet) + "]");
  return v;
}

inline std::vector<double> get_state_pmf(const json& j, int expect) {
  if (!j.contains("state_pmf")) throw SpecError("missing state_pmf");
  std::vector<double> p = j.at("state_pmf").get<std::vector<double>>();
  if (static_cast<int>(p.size()) != expect)
    throw SpecError("state_pmf: expected " + std::to_string(expect) + " entries");
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0) throw SpecError("state_pmf: negative entry");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-6) throw SpecError("state_pmf: entries must sum to 1 within 1e-6");
  for (double& v : p) v /= s;
  return p;
}

/// Flatten `transition` nested per the given input dims, innermost output
/// dims; validates each row sums to 1 within 1e-6 and renormalizes.
inline std::vector<double> get_transition(const json& j, const std::vector<int>& in_dims,
                                          const std::vector<int>& out_dims) {
  if (!j.contains("transition")) throw SpecError("missing transition");
  long rows = 1;
  for (int d : in_dims) rows *= d;
  long cols = 1;
  for (int d : out_dims) cols *= d;
  std::vector<double> t(static_cast<std::size_t>(rows) * cols, 0.0);

  // Walk the nesting: in_dims levels, then out_dims levels of arrays.
  std::vector<int> dims = in_dims;
  dims.insert(dims.end(), out_dims.begin(), out_dims.end());
  std::function<void(const json&, std::size_t, long)> walk = [&](const json& node, std::size_t level,
                                                                 long flat) {
    if (level == dims.size()) {
      if (!node.is_number()) throw SpecError("transition: non-numeric leaf");
      t[static_cast<std::size_t>(flat)] = node.get<double>();
      return;
    }
    if (!node.is_array() || static_cast<int>(node.size()) != dims[level])
      throw SpecError("transition: level " + std::to_string(level) + " expects " +
                      std::to_string(dims[level]) + " entries");
    for (int i = 0; i < dims[level]; ++i) walk(node[i], level + 1, flat * dims[level] + i);
  };
  walk(j.at("transition"), 0, 0);

  for (long r = 0; r < rows; ++r) {
    double s = 0.0;
    for (long c = 0; c < cols; ++c) {
      double v = t[static_cast<std::size_t>(r) * cols + c];
      if (v < 0.0) throw SpecError("transition: negative entry in row " + std::to_string(r));
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-6)
      throw SpecError("transition: row " + std::to_string(r) + " sums to " + std::to_string(s) +
                      ", not 1 within 1e-6");
    for (long c = 0; c < cols; ++c) t[static_cast<std::size_t>(r) * cols + c] /= s;
  }
  return t;
}

} // namespace spec_detail

inline AnyChannel load_channel_json(const nlohmann::json& j) {
  using namespace spec_detail;
  if (!j.contains("kind")) throw SpecError("missing kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (!j.contains("alphabets")) throw SpecError("missing alphabets");
  const json& alph = j.at("alphabets");

  if (kind == "single") {
    int nx = get_size(alph, "X"), ns = get_size(alph, "S"), ny = get_size(alph, "Y");
    Pmf ps{get_state_pmf(j, ns)};
    CondPmf tr(nx * ns, ny, get_transition(j, {nx, ns}, {ny}));
    return StateChannel(nx, ns, ny, std::move(ps), std::move(tr));
  }
  if (kind == "mac") {
    int nx1 = get_size(alph, "X1"), nx2 = get_size(alph, "X2");
    int ns1 = get_size(alph, "S1"), ns2 = get_size(alph, "S2");
    int ny1 = 0, ny2 = 0, ny;
    if (alph.contains("Y1") || alph.contains("Y2")) {
      ny1 = get_size(alph, "Y1");
      ny2 = get_size(alph, "Y2");
      ny = ny1 * ny2;
    } else {
      ny = get_size(alph, "Y");
    }
    JointPmf st({{"S1", ns1}, {"S2", ns2}}, get_state_pmf(j, ns1 * ns2));
    std::vector<int> outs = ny1 > 0 ? std::vector<int>{ny1, ny2} : std::vector<int>{ny};
    CondPmf tr(nx1 * nx2 * ns1 * ns2, ny, get_transition(j, {nx1, nx2, ns1, ns2}, outs));
    return MacStateChannel(nx1, nx2, ns1, ns2, ny, std::move(st), std::move(tr), ny1, ny2);
  }
  if (kind == "bc") {
    int nx = get_size(alph, "X"), ns = get_size(alph, "S");
    int ny1 = get_size(alph, "Y1"), ny2 = get_size(alph, "Y2");
    Pmf ps{get_state_pmf(j, ns)};
    CondPmf tr(nx * ns, ny1 * ny2, get_transition(j, {nx, ns}, {ny1, ny2}));
    return BcStateChannel(nx, ns, ny1, ny2, std::move(ps), std::move(tr));
  }
  if (kind == "relay") {
    int nx = get_size(alph, "X"), nxr = get_size(alph, "XR");
    int ns1, ns2;
    if (alph.contains("S1") || alph.contains("S2")) {
      ns1 = get_size(alph, "S1");
      ns2 = get_size(alph, "S2");
    } else {
      ns1 = get_size(alph, "S");
      ns2 = 1;
    }
    int nyr = get_size(alph, "YR"), ny = get_size(alph, "Y");
    JointPmf st({{"S1", ns1}, {"S2", ns2}}, get_state_pmf(j, ns1 * ns2));
    CondPmf tr(nx * nxr * ns1 * ns2, ny * nyr, get_transition(j, {nx, nxr, ns1, ns2}, {ny, nyr}));
    return RelayStateChannel(nx, nxr, ns1, ns2, nyr, ny, std::move(st), std::move(tr));
  }
  throw SpecError("kind must be one of single|mac|bc|relay, got '" + kind + "'");
}

inline AnyChannel load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open channel spec '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SpecError(std::string("channel spec parse error: ") + e.what());
  }
  try {
    return load_channel_json(j);
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("channel spec invalid: ") + e.what());
  }
}

}  // namespace statecap
