public class Api {
    public static int indexOf(int[] arr, int target) {
        int idx = -1;
        for (int i = 0; i < arr.length; i++) {
            if (arr[i] == target) {
                idx = i;
                break;
            }
        }
        if (idx < 0) {
            return -1;
        }
        return idx;
    }
}
