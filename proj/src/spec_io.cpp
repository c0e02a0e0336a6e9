#include "twistkit/spec_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace twistkit {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::SchemaError, msg); }

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

IndexTuple parse_index_key(const std::string& key, std::size_t degree, std::size_t dim) {
  IndexTuple out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = key.find(',', start);
    const std::string part = key.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (part.empty() || part.size() > 6 ||
        !std::all_of(part.begin(), part.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      schema("bad index key \"" + key + "\"");
    const std::size_t value = std::stoul(part);
    if (value < 1 || value > dim) schema("index key \"" + key + "\" out of range 1.." + std::to_string(dim));
    out.push_back(value - 1);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != degree)
    schema("index key \"" + key + "\" needs " + std::to_string(degree) + " indices");
  std::set<std::size_t> distinct(out.begin(), out.end());
  if (distinct.size() != out.size()) schema("index key \"" + key + "\" repeats an index");
  return out;
}

template <Variance V>
AntisymmetricField<V> parse_components(const json& node, const std::string& field, std::size_t degree,
                                       const Chart& chart) {
  if (!node.is_object()) schema("\"" + field + "\" must be an object of index keys to expressions");
  AntisymmetricField<V> out(degree, chart.dim());
  for (const auto& [key, value] : node.items()) {
    IndexTuple idx = parse_index_key(key, degree, chart.dim());
    if (!value.is_string()) schema("\"" + field + "\"[\"" + key + "\"] must be an expression string");
    ScalarExpr e(chart.dim());
    try {
      e = parse_scalar(value.template get<std::string>(), chart);
    } catch (const Error& err) {
      throw Error(ErrorKind::ExpressionError, field + "[\"" + key + "\"]: " + err.what());
    }
    out.accumulate(std::move(idx), e);
  }
  return out;
}

template <Variance V>
ordered_json components_to_json(const AntisymmetricField<V>& t, const Chart& chart) {
  ordered_json out = ordered_json::object();
  for (const auto& [idx, v] : t.components()) out[index_key(idx)] = v.to_string(chart);
  return out;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string structure_label(const StructureKey& key, std::size_t dim) {
  const auto [i, j, k] = key;
  const std::string sep = dim >= 10 ? "," : "";
  return "c^{" + std::to_string(i + 1) + sep + std::to_string(j + 1) + "}_" + std::to_string(k + 1);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string index_key(const IndexTuple& indices) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(indices[i] + 1);
  }
  return out;
}

ManifoldSpec parse_spec(const json& doc) {
  if (!doc.is_object()) schema("spec must be a JSON object");
  static const std::set<std::string> allowed = {"dimension", "coordinates", "bivector", "two_form", "three_form"};
  for (const auto& [key, value] : doc.items())
    if (!allowed.contains(key)) schema("unknown key \"" + key + "\"");
  for (const char* required : {"dimension", "coordinates", "bivector"})
    if (!doc.contains(required)) schema(std::string("missing key \"") + required + "\"");
  const bool has_two = doc.contains("two_form");
  const bool has_three = doc.contains("three_form");
  if (has_two == has_three) schema("exactly one of \"two_form\" or \"three_form\" is required");

  const json& dim_node = doc["dimension"];
  if (!dim_node.is_number_integer() || dim_node.get<long long>() < 1 || dim_node.get<long long>() > 64)
    schema("\"dimension\" must be an integer in 1..64");
  const auto dim = static_cast<std::size_t>(dim_node.get<long long>());

  const json& coords = doc["coordinates"];
  if (!coords.is_array()) schema("\"coordinates\" must be an array of names");
  if (coords.size() != dim) schema("\"coordinates\" has " + std::to_string(coords.size()) + " names for dimension " + std::to_string(dim));
  std::vector<std::string> names;
  for (const auto& c : coords) {
    if (!c.is_string() || !is_identifier(c.get<std::string>())) schema("coordinate names must be identifiers");
    names.push_back(c.get<std::string>());
  }

  ManifoldSpec spec{Chart(std::move(names)), KVector(2, dim), TwoFormBackground{KForm(2, dim)}};
  spec.pi = parse_components<Variance::Contravariant>(doc["bivector"], "bivector", 2, spec.chart);
  if (has_two) spec.background = TwoFormBackground{parse_components<Variance::Covariant>(doc["two_form"], "two_form", 2, spec.chart)};
  else spec.background = ThreeFormBackground{parse_components<Variance::Covariant>(doc["three_form"], "three_form", 3, spec.chart)};
  return spec;
}

ManifoldSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::IoError, path.string() + " is not valid JSON: " + e.what());
  }
  return parse_spec(doc);
}

ordered_json spec_to_json(const ManifoldSpec& spec) {
  ordered_json out;
  out["dimension"] = spec.dim();
  out["coordinates"] = spec.chart.names();
  out["bivector"] = components_to_json(spec.pi, spec.chart);
  if (const auto* two = std::get_if<TwoFormBackground>(&spec.background))
    out["two_form"] = components_to_json(two->omega, spec.chart);
  else
    out["three_form"] = components_to_json(std::get<ThreeFormBackground>(spec.background).h, spec.chart);
  return out;
}

OutputFormat parse_format(std::string_view name) {
  if (name == "text") return OutputFormat::Text;
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw Error(ErrorKind::SchemaError, "unknown output format \"" + std::string(name) + "\"");
}

ordered_json report_to_json(const ManifoldSpec& spec, const Report& r) {
  const Chart& chart = spec.chart;
  ordered_json out;
  out["dimension"] = spec.dim();
  out["coordinates"] = chart.names();
  out["background"] = spec.has_two_form() ? "two_form" : "three_form";
  out["h_closed"] = r.h_closed;
  out["poisson"] = r.is_poisson;
  out["twisted_poisson"] = r.is_twisted_poisson;
  out["effective_H"] = components_to_json(r.effective_h, chart);
  out["jacobiator"] = components_to_json(r.jacobiator, chart);
  out["contraction"] = components_to_json(r.contraction, chart);
  out["residual"] = components_to_json(r.residual, chart);
  ordered_json sf = ordered_json::object();
  for (const auto& [key, value] : r.structure_functions)
    if (!value.is_zero()) sf[structure_label(key, spec.dim())] = value.to_string(chart);
  out["structure_functions"] = sf;
  out["conventions"] = {
      {"jacobiator", "J^{ijk} = Pi^{il} d_l Pi^{jk} + cyclic"},
      {"contraction", "C^{ijk} = H_{lmn} Pi^{li} Pi^{mj} Pi^{nk}"},
      {"residual", "J - C"},
      {"twisted_symplectic_sign", kTwistedSymplecticSign},
  };
  return out;
}

std::string render_report(const ManifoldSpec& spec, const Report& r, OutputFormat format) {
  if (format == OutputFormat::Json) return dump(report_to_json(spec, r));
  const Chart& chart = spec.chart;
  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    os << "field,key,value\n";
    os << "h_closed,," << (r.h_closed ? "true" : "false") << "\n";
    os << "poisson,," << (r.is_poisson ? "true" : "false") << "\n";
    os << "twisted_poisson,," << (r.is_twisted_poisson ? "true" : "false") << "\n";
    auto rows = [&](const char* name, const auto& t) {
      for (const auto& [idx, v] : t.components()) os << name << ",\"" << index_key(idx) << "\",\"" << v.to_string(chart) << "\"\n";
    };
    rows("effective_H", r.effective_h);
    rows("jacobiator", r.jacobiator);
    rows("contraction", r.contraction);
    rows("residual", r.residual);
    return os.str();
  }
  os << "h_closed: " << (r.h_closed ? "true" : "false") << "\n";
  os << "poisson: " << (r.is_poisson ? "true" : "false") << "\n";
  os << "twisted_poisson: " << (r.is_twisted_poisson ? "true" : "false") << "\n";
  auto section = [&](const char* name, const auto& t) {
    os << name << ":";
    if (t.is_zero()) {
      os << " 0\n";
      return;
    }
    os << "\n";
    for (const auto& [idx, v] : t.components()) os << "  (" << index_key(idx) << "): " << v.to_string(chart) << "\n";
  };
  section("effective_H", r.effective_h);
  section("jacobiator", r.jacobiator);
  section("contraction", r.contraction);
  section("residual", r.residual);
  return os.str();
}

std::string render_structure(const ManifoldSpec& spec, const StructureFunctions& sf, OutputFormat format) {
  const Chart& chart = spec.chart;
  if (format == OutputFormat::Json) {
    ordered_json rows = ordered_json::array();
    for (const auto& [key, value] : sf) {
      if (value.is_zero()) continue;
      const auto [i, j, k] = key;
      rows.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"value", value.to_string(chart)}});
    }
    return dump(ordered_json{{"structure_functions", rows}});
  }
  std::ostringstream os;
  if (format == OutputFormat::Csv) os << "i,j,k,value\n";
  for (const auto& [key, value] : sf) {
    if (value.is_zero()) continue;
    const auto [i, j, k] = key;
    if (format == OutputFormat::Csv)
      os << i + 1 << "," << j + 1 << "," << k + 1 << ",\"" << value.to_string(chart) << "\"\n";
    else
      os << structure_label(key, spec.dim()) << " = " << value.to_string(chart) << "\n";
  }
  return os.str();
}

std::string render_closure(const ClosureStudy& study, OutputFormat format) {
  auto ratio_text = [](const ClosureRow& row) -> std::string {
    if (row.ratio) return number(*row.ratio);
    return "";
  };
  if (format == OutputFormat::Json) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : study.rows) {
      ordered_json r;
      r["N"] = row.sites;
      r["max_constraint"] = number(row.max_constraint);
      r["closure_residual"] = number(row.residual);
      r["ratio_to_previous"] = row.ratio ? ordered_json(number(*row.ratio)) : ordered_json(nullptr);
      r["exact"] = row.exact;
      r["converging"] = row.converging;
      rows.push_back(r);
    }
    return dump(ordered_json{{"rows", rows}, {"passed", study.passed()}});
  }
  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    os << "N,max_constraint,closure_residual,ratio_to_previous\n";
    for (const auto& row : study.rows)
      os << row.sites << "," << number(row.max_constraint) << "," << number(row.residual) << "," << ratio_text(row) << "\n";
    return os.str();
  }
  os << "N      max|phi|       residual       ratio\n";
  for (const auto& row : study.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6zu %-14s %-14s %s%s\n", row.sites, number(row.max_constraint).c_str(),
                  number(row.residual).c_str(), row.ratio ? number(*row.ratio).c_str() : "-",
                  row.exact ? " (exact)" : "");
    os << line;
  }
  os << "closure: " << (study.passed() ? "converging" : "not converging") << "\n";
  return os.str();
}

std::string render_flow(const FlowResult& f, OutputFormat format) {
  if (format == OutputFormat::Json) {
    ordered_json out;
    out["N"] = f.sites;
    out["dt"] = number(f.dt);
    out["steps"] = f.steps;
    out["initial_max_constraint"] = number(f.initial_max_constraint);
    out["final_max_constraint"] = number(f.final_max_constraint);
    out["drift"] = number(f.drift);
    out["envelope"] = number(f.envelope);
    out["within_envelope"] = f.within_envelope();
    return dump(out);
  }
  std::ostringstream os;
  if (format == OutputFormat::Csv) {
    os << "N,dt,steps,initial_max_constraint,final_max_constraint,drift,envelope\n";
    os << f.sites << "," << number(f.dt) << "," << f.steps << "," << number(f.initial_max_constraint) << ","
       << number(f.final_max_constraint) << "," << number(f.drift) << "," << number(f.envelope) << "\n";
    return os.str();
  }
  os << "N: " << f.sites << "\n"
     << "dt: " << number(f.dt) << "\n"
     << "steps: " << f.steps << "\n"
     << "initial max|phi|: " << number(f.initial_max_constraint) << "\n"
     << "final max|phi|: " << number(f.final_max_constraint) << "\n"
     << "drift: " << number(f.drift) << "\n"
     << "envelope: " << number(f.envelope) << "\n"
     << "within envelope: " << (f.within_envelope() ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace twistkit
