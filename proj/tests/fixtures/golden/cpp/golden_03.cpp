#include <vector>

namespace metrics {

class Counter {
  public:
    Counter(int start) : total(start) {}

    int bump(int by) {
        if (by > 0) {
            total += by;
        }
        return total;
    }

    int sumGrid(int rows, int cols) {
        int sum = 0;
        for (int r = 0; r < rows; r++) {
            for (int c = 0; c < cols; c++) {
                if ((r + c) % 2 == 0) {
                    sum += r * c;
                }
            }
        }
        return sum;
    }

  private:
    int total;
};

}
