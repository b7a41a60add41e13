#include "slcd/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace slcd {

GrayImage make_image(int height, int width, uint8_t fill) {
    if (height < 1 || width < 1) {
        throw BadImage("make_image: dimensions must be positive");
    }
    GrayImage img;
    img.height = height;
    img.width = width;
    img.pixels.assign(size_t(height) * width, fill);
    return img;
}

namespace {

// Next whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (!std::isspace(ch)) {
            tok.push_back(char(ch));
            while ((ch = in.peek()) != EOF && !std::isspace(ch)) {
                tok.push_back(char(in.get()));
            }
            return tok;
        }
    }
    throw ParseError("image: unexpected end of header");
}

int parse_int(const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("image: bad ") + what + " '" + tok + "'");
    }
}

}  // namespace

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image file: " + path);

    const std::string magic = next_token(in);
    if (magic != "P5" && magic != "P6") {
        throw ParseError("image: unsupported format '" + magic +
                         "' (binary PGM/PPM only)");
    }
    const int width = parse_int(next_token(in), "width");
    const int height = parse_int(next_token(in), "height");
    const int maxval = parse_int(next_token(in), "maxval");
    if (width < 1 || height < 1) throw ParseError("image: bad dimensions");
    if (maxval != 255) throw ParseError("image: only maxval 255 supported");
    in.get();  // single whitespace after maxval

    GrayImage img = make_image(height, width);
    if (magic == "P5") {
        in.read(reinterpret_cast<char*>(img.pixels.data()),
                std::streamsize(img.pixels.size()));
        if (size_t(in.gcount()) != img.pixels.size()) {
            throw ParseError("image: truncated pixel data");
        }
    } else {
        std::vector<uint8_t> rgb(img.pixels.size() * 3);
        in.read(reinterpret_cast<char*>(rgb.data()),
                std::streamsize(rgb.size()));
        if (size_t(in.gcount()) != rgb.size()) {
            throw ParseError("image: truncated pixel data");
        }
        for (size_t i = 0; i < img.pixels.size(); ++i) {
            const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] +
                             0.114 * rgb[3 * i + 2];
            img.pixels[i] = uint8_t(std::lround(std::clamp(y, 0.0, 255.0)));
        }
    }
    return img;
}

void save_pgm(const GrayImage& image, const std::string& path) {
    if (image.pixels.size() != size_t(image.height) * image.width) {
        throw BadImage("save_pgm: inconsistent buffer size");
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write image file: " + tmp);
        out << "P5\n" << image.width << " " << image.height << "\n255\n";
        out.write(reinterpret_cast<const char*>(image.pixels.data()),
                  std::streamsize(image.pixels.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

double gradient_magnitude(const GrayImage& image, int r, int c) {
    auto px = [&](int rr, int cc) {
        rr = std::clamp(rr, 0, image.height - 1);
        cc = std::clamp(cc, 0, image.width - 1);
        return double(image.at(rr, cc)) / 255.0;
    };
    const double gx = 0.5 * (px(r, c + 1) - px(r, c - 1));
    const double gy = 0.5 * (px(r + 1, c) - px(r - 1, c));
    return std::hypot(gx, gy);
}

}  // namespace slcd
