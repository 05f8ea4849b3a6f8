import static java.lang.Math.*;
import java.util.*;

public class Stats {
    public double meanAbs(double[] xs) {
        double sum = 0.0;
        for (double x : xs) {
            sum += abs(x);
        }
        return xs.length == 0 ? 0.0 : sum / xs.length;
    }
}
