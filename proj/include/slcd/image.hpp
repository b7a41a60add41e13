#pragma once

/**
 * @file image.hpp
 * @brief 8-bit grayscale images with binary PGM/PPM IO. PPM input is
 *        converted to luma by 0.299 R + 0.587 G + 0.114 B.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "slcd/error.hpp"

namespace slcd {

struct GrayImage {
    int height{};
    int width{};
    std::vector<uint8_t> pixels;  // row-major

    uint8_t at(int r, int c) const { return pixels[size_t(r) * width + c]; }
    uint8_t& at(int r, int c) { return pixels[size_t(r) * width + c]; }
};

GrayImage make_image(int height, int width, uint8_t fill = 0);

/// Reads a binary PGM (P5) or PPM (P6, converted to luma) file.
GrayImage load_image(const std::string& path);

/// Writes a binary PGM (P5); the write is atomic (temp file then rename).
void save_pgm(const GrayImage& image, const std::string& path);

/// Central-difference gradient magnitude at a pixel, with indices clamped
/// at the borders. Intensities are read on the [0, 1] scale.
double gradient_magnitude(const GrayImage& image, int r, int c);

}  // namespace slcd
