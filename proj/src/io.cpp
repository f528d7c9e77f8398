#include "dpnls/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace dpnls {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cparse(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError(std::string("expected [re, im] for ") + what);
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> carray(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(cparse(e, what));
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_parent(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

}  // namespace

std::string scattering_to_json(const ScatteringData& data) {
  json doc;
  if (!data.r.empty()) {
    doc["z_grid"] = {{"lo", data.z_grid.lo}, {"step", data.z_grid.step}, {"size", data.z_grid.size}};
    json r = json::array();
    for (auto v : data.r) r.push_back(cjson(v));
    doc["r"] = r;
    if (!data.s11.empty()) {
      json s11 = json::array(), s21 = json::array();
      for (auto v : data.s11) s11.push_back(cjson(v));
      for (auto v : data.s21) s21.push_back(cjson(v));
      doc["s11"] = s11;
      doc["s21"] = s21;
    }
  }
  json disc = json::array();
  for (const auto& d : data.discrete) {
    json e = {{"z", cjson(d.z)}, {"order", d.order}, {"c0", cjson(d.c0)}, {"c1", cjson(d.c1)}};
    if (d.b) e["b"] = cjson(*d.b);
    if (d.d) e["d"] = cjson(*d.d);
    disc.push_back(e);
  }
  doc["discrete"] = disc;
  // nlohmann prints doubles with max_digits10, which is the 17 digits we want.
  return doc.dump(1);
}

ScatteringData scattering_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed scattering document: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("scattering document must be a JSON object");
  ScatteringData sd;
  try {
    if (doc.contains("r")) {
      if (!doc.contains("z_grid")) throw InputError("r given without z_grid");
      const auto& g = doc.at("z_grid");
      sd.z_grid = {g.at("lo").get<double>(), g.at("step").get<double>(), g.at("size").get<std::size_t>()};
      sd.r = carray(doc.at("r"), "r");
      if (sd.r.size() != sd.z_grid.size) throw InputError("r length does not match z_grid.size");
      if (!(sd.z_grid.step > 0.0)) throw InputError("z_grid.step must be positive");
      if (doc.contains("s11")) sd.s11 = carray(doc.at("s11"), "s11");
      if (doc.contains("s21")) sd.s21 = carray(doc.at("s21"), "s21");
    }
    if (doc.contains("discrete")) {
      for (const auto& e : doc.at("discrete")) {
        DiscreteDatum d;
        d.z = cparse(e.at("z"), "z");
        d.order = e.value("order", 2);
        d.c0 = cparse(e.at("c0"), "c0");
        d.c1 = e.contains("c1") ? cparse(e.at("c1"), "c1") : cplx(0.0);
        if (e.contains("b")) d.b = cparse(e.at("b"), "b");
        if (e.contains("d")) d.d = cparse(e.at("d"), "d");
        d.validate();
        sd.discrete.push_back(d);
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed scattering document: ") + e.what());
  }
  return sd;
}

void write_scattering(const std::filesystem::path& path, const ScatteringData& data) {
  ensure_parent(path);
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << scattering_to_json(data) << '\n';
}

ScatteringData read_scattering(const std::filesystem::path& path) {
  return scattering_from_json(slurp(path));
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  ensure_parent(path);
  stream_ = std::make_unique<std::ofstream>(path);
  if (!*stream_) throw InputError("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) *stream_ << (i ? "," : "") << header[i];
  *stream_ << '\n';
}

std::ofstream* CsvWriter::out() {
  if (!stream_) throw InputError("CSV writer already closed: " + path_.string());
  return stream_.get();
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw InputError("CSV row width does not match the header");
  auto* o = out();
  for (std::size_t i = 0; i < values.size(); ++i) *o << (i ? "," : "") << format_number(values[i]);
  *o << '\n';
}

void CsvWriter::close() {
  if (stream_) {
    stream_->flush();
    if (!*stream_) throw InputError("write failed: " + path_.string());
    stream_.reset();
  }
}

void write_reflection_csv(const std::filesystem::path& path, const ScatteringData& data) {
  CsvWriter w(path, {"z", "re_r", "im_r", "abs_r"});
  for (std::size_t i = 0; i < data.r.size(); ++i)
    w.row({data.z_grid[i], data.r[i].real(), data.r[i].imag(), std::abs(data.r[i])});
  w.close();
}

void write_field(const std::filesystem::path& dir, const SpaceTimeField& field) {
  std::filesystem::create_directories(dir);
  json files = json::array();
  const auto x = field.grid.points();
  for (std::size_t s = 0; s < field.slices(); ++s) {
    std::ostringstream name;
    name << "slice_" << std::setw(5) << std::setfill('0') << s << ".csv";
    CsvWriter w(dir / name.str(), {"x", "re_q", "im_q"});
    for (std::size_t j = 0; j < field.grid.modes; ++j)
      w.row({x[j], field.q[s][j].real(), field.q[s][j].imag()});
    w.close();
    files.push_back(name.str());
  }
  json doc = {{"grid", {{"lo", field.grid.lo}, {"hi", field.grid.hi}, {"modes", field.grid.modes}}},
              {"dt", field.dt},
              {"t", field.t},
              {"files", files}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw InputError("cannot write manifest in " + dir.string());
  out << doc.dump(1) << '\n';
}

SpaceTimeField read_field(const std::filesystem::path& dir) {
  SpaceTimeField f;
  json doc;
  try {
    doc = json::parse(slurp(dir / "manifest.json"));
    f.grid.lo = doc.at("grid").at("lo").get<double>();
    f.grid.hi = doc.at("grid").at("hi").get<double>();
    f.grid.modes = doc.at("grid").at("modes").get<std::size_t>();
    f.dt = doc.at("dt").get<double>();
    f.t = doc.at("t").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw InputError("malformed field manifest in " + dir.string() + ": " + e.what());
  }
  f.grid.validate();
  const auto& files = doc.at("files");
  if (files.size() != f.t.size()) throw InputError("manifest lists a different number of slices and times");
  for (const auto& name : files) {
    std::ifstream in(dir / name.get<std::string>());
    if (!in) throw InputError("missing slice file " + name.get<std::string>());
    std::string line;
    std::getline(in, line);  // header
    std::vector<cplx> slice;
    slice.reserve(f.grid.modes);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      ls.imbue(std::locale::classic());
      double x, re, im;
      char c1, c2;
      if (!(ls >> x >> c1 >> re >> c2 >> im)) throw InputError("bad row in " + name.get<std::string>());
      slice.emplace_back(re, im);
    }
    if (slice.size() != f.grid.modes) throw InputError("slice " + name.get<std::string>() + " has the wrong length");
    f.q.push_back(std::move(slice));
  }
  return f;
}

}  // namespace dpnls
