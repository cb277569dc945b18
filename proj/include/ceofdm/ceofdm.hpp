#pragma once

#include "ceofdm/types.hpp"
#include "ceofdm/fft.hpp"
#include "ceofdm/waveform.hpp"
#include "ceofdm/spectral.hpp"
#include "ceofdm/correlation.hpp"
#include "ceofdm/gradient.hpp"
#include "ceofdm/optimizer.hpp"
#include "ceofdm/quantization.hpp"
