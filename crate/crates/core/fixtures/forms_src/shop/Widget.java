package shop;

public class Widget {
    public int count;

    public void refresh() {
    }
}
