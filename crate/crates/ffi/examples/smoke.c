#include <stdio.h>
#include "hlslab.h"

int main(void) {
    HlsDecoder *dec = NULL;
    if (hlslab_decoder_new(NULL, &dec) != HLS_STATUS_OK) {
        fprintf(stderr, "%s\n", hlslab_last_error());
        return 1;
    }
    int64_t x[4] = {0, 0, 0, 0};
    HlsStep s;
    hlslab_decoder_step(dec, x, -1, &s);
    printf("symbol %u sv0 (%lld,%lld)\n", s.symbol, (long long)s.sv0_re, (long long)s.sv0_im);
    hlslab_decoder_free(dec);

    int64_t raw;
    hlslab_fx_convert(1, 3, 8, 1, true, HLS_QUANT_RND, HLS_OVERFLOW_SAT, &raw);
    printf("1/3 -> %lld\n", (long long)raw);

    uint32_t w;
    bool sgn;
    if (hlslab_infer_width("(add int8 int8", &w, &sgn) != HLS_STATUS_PARSE)
        return 1;
    printf("error: %s\n", hlslab_last_error());
    return 0;
}
