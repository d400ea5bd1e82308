#include "bimsense/harness/map_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "bimsense/errors.hpp"
#include "bimsense/grid/occupancy_grid.hpp"

namespace bimsense {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : b_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(b_[pos_]))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  int integer(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    token_ = start;
    long v = 0;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      v = v * 10 + (b_[pos_] - '0');
      if (v > 1'000'000) throw ParseError(std::string("pgm: ") + what + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("pgm: expected ") + what, start);
    return static_cast<int>(v);
  }

  std::size_t pos() const { return pos_; }
  std::size_t token_start() const { return token_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  const std::string& b_;
  std::size_t pos_ = 0;
  std::size_t token_ = 0;
};

double read_double(const YAML::Node& root, const char* key) {
  const YAML::Node n = root[key];
  if (!n) throw ParseError(std::string("map yaml: missing key '") + key + "'", 0);
  try {
    return n.as<double>();
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("map yaml: bad value for '") + key + "'", e.mark.pos);
  }
}

}  // namespace

PgmImage parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw ParseError("pgm: missing P5 magic", 0);
  HeaderReader r(bytes);
  r.advance(2);
  PgmImage img;
  img.width = r.integer("width");
  if (img.width <= 0) throw ParseError("pgm: empty image", r.token_start());
  img.height = r.integer("height");
  if (img.height <= 0) throw ParseError("pgm: empty image", r.token_start());
  const int maxval = r.integer("maxval");
  if (maxval <= 0 || maxval > 255)
    throw ParseError("pgm: only 8-bit images are supported", r.token_start());
  if (r.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos()])))
    throw ParseError("pgm: expected whitespace after header", r.pos());
  r.advance(1);
  const std::size_t need = static_cast<std::size_t>(img.width) * img.height;
  if (bytes.size() - r.pos() < need)
    throw ParseError("pgm: pixel data shorter than width x height", bytes.size());
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos()),
                    bytes.begin() + static_cast<std::ptrdiff_t>(r.pos() + need));
  return img;
}

ClassifiedMap load_map(const std::filesystem::path& yaml_path) {
  const std::string text = read_file(yaml_path);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ParseError("map yaml: " + e.msg, e.mark.pos);
  }
  if (!root.IsMap()) throw ParseError("map yaml: expected a mapping", 0);
  if (!root["image"]) throw ParseError("map yaml: missing key 'image'", 0);

  ClassifiedMap map;
  map.meta.resolution = read_double(root, "resolution");
  map.occupied_thresh = read_double(root, "occupied_thresh");
  map.free_thresh = read_double(root, "free_thresh");
  const bool negate = root["negate"] ? root["negate"].as<int>() != 0 : false;
  const YAML::Node origin = root["origin"];
  if (!origin || !origin.IsSequence() || origin.size() < 2)
    throw ParseError("map yaml: origin must be [x, y, yaw]", origin ? origin.Mark().pos : 0);
  map.meta.origin = {origin[0].as<double>(), origin[1].as<double>()};
  if (origin.size() > 2 && origin[2].as<double>() != 0.0)
    throw ConfigError("map yaml: rotated origins are not supported");
  if (!(map.meta.resolution > 0.0)) throw ParseError("map yaml: resolution must be positive", 0);

  std::filesystem::path image = root["image"].as<std::string>();
  if (image.is_relative()) image = yaml_path.parent_path() / image;
  const PgmImage img = parse_pgm(read_file(image));
  map.meta.width = img.width;
  map.meta.height = img.height;
  map.cells.resize(map.meta.cell_count());
  for (int row = 0; row < img.height; ++row)
    for (int x = 0; x < img.width; ++x) {
      const int v = img.pixels[static_cast<std::size_t>(row) * img.width + x];
      const double p = negate ? v / 255.0 : (255 - v) / 255.0;
      const CellClass c = p > map.occupied_thresh ? CellClass::kOccupied
                          : p < map.free_thresh   ? CellClass::kFree
                                                  : CellClass::kUnknown;
      map.cells[map.meta.index({x, img.height - 1 - row})] = c;
    }
  return map;
}

void save_map(const ClassifiedMap& map, const std::filesystem::path& yaml_path) {
  const GridMeta& m = map.meta;
  if (!m.valid() || map.cells.size() != m.cell_count())
    throw ConfigError("save_map: inconsistent map");
  std::filesystem::path pgm = yaml_path;
  pgm.replace_extension(".pgm");
  {
    std::ofstream out(pgm, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + pgm.string());
    out << "P5\n" << m.width << ' ' << m.height << "\n255\n";
    std::string row(static_cast<std::size_t>(m.width), '\0');
    for (int y = m.height - 1; y >= 0; --y) {
      for (int x = 0; x < m.width; ++x) {
        const CellClass c = map.cells[m.index({x, y})];
        row[x] = static_cast<char>(c == CellClass::kOccupied ? 0
                                   : c == CellClass::kFree   ? 254
                                                             : 205);
      }
      out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
  }
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "image" << YAML::Value << pgm.filename().string();
  e << YAML::Key << "resolution" << YAML::Value << m.resolution;
  e << YAML::Key << "origin" << YAML::Value << YAML::Flow << YAML::BeginSeq << m.origin.x
    << m.origin.y << 0.0 << YAML::EndSeq;
  e << YAML::Key << "negate" << YAML::Value << 0;
  e << YAML::Key << "occupied_thresh" << YAML::Value << 0.65;
  e << YAML::Key << "free_thresh" << YAML::Value << 0.196;
  e << YAML::EndMap;
  std::ofstream out(yaml_path);
  if (!out) throw ConfigError("cannot write " + yaml_path.string());
  out << e.c_str() << '\n';
}

ClassifiedMap classify(const OccupancyGrid& grid, double occupied_thresh, double free_thresh) {
  ClassifiedMap map;
  map.meta = grid.meta();
  map.cells.resize(map.meta.cell_count());
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    const double p = logodds_to_probability(grid.logodds(i));
    map.cells[i] = p > occupied_thresh ? CellClass::kOccupied
                   : p < free_thresh   ? CellClass::kFree
                                       : CellClass::kUnknown;
  }
  return map;
}

std::vector<std::uint8_t> occupancy_raster(const ClassifiedMap& map) {
  std::vector<std::uint8_t> out(map.cells.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = map.cells[i] == CellClass::kOccupied;
  return out;
}

}  // namespace bimsense
