#pragma once

// Umbrella header for the full pipeline.

#include "mustem/audio.hpp"
#include "mustem/colormap.hpp"
#include "mustem/config.hpp"
#include "mustem/fft.hpp"
#include "mustem/framebuffer.hpp"
#include "mustem/haptic.hpp"
#include "mustem/renderer.hpp"
#include "mustem/scheduler.hpp"
#include "mustem/spectral.hpp"
#include "mustem/sweep.hpp"
#include "mustem/wav.hpp"
