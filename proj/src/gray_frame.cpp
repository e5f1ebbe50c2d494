#include "cct/gray_frame.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>

namespace cct {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch)) != 0) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(ch);
  }
  return token;
}

int header_int(std::istream& in, const std::filesystem::path& path, const char* field) {
  const std::string token = header_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ": bad PGM " + field + " '" + token + "'");
  }
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const GrayFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

GrayFrame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  const std::string magic = header_token(in);
  if (magic != "P5" && magic != "P2") {
    throw std::runtime_error(path.string() + ": not a PGM file (magic '" + magic + "')");
  }
  const int width = header_int(in, path, "width");
  const int height = header_int(in, path, "height");
  const int maxval = header_int(in, path, "maxval");
  if (width < 1 || height < 1) throw std::runtime_error(path.string() + ": empty PGM");
  if (maxval < 1 || maxval > 255) {
    throw std::runtime_error(path.string() + ": only 8-bit PGM is supported");
  }

  GrayFrame frame(width, height);
  if (magic == "P5") {
    in.read(reinterpret_cast<char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.pixels.size())) {
      throw std::runtime_error(path.string() + ": truncated pixel data");
    }
  } else {
    for (auto& p : frame.pixels) {
      int v = 0;
      if (!(in >> v) || v < 0 || v > maxval) {
        throw std::runtime_error(path.string() + ": bad ASCII pixel value");
      }
      p = static_cast<std::uint8_t>(v);
    }
  }
  return frame;
}

}  // namespace cct
